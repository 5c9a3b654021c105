"""Multilingual hope-speech classification pipeline on frozen features."""

__version__ = "0.1.0"
