"""Embedding export sidecar for the ghalib pipeline.

Runs a frozen pretrained encoder over a corpus and writes the pooled
final-layer states to a GHEM file that the core pipeline consumes as a
feature backend. The two packages share no code: the corpus layout and
the GHEM byte format are the whole contract.
"""

__version__ = "0.1.0"
