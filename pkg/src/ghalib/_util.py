"""Seed derivation and artifact provenance helpers."""

from __future__ import annotations

import hashlib
import json
import random
from typing import Any

import numpy as np


def derive_seed(*parts: Any) -> int:
    """Derive a platform-independent 64-bit seed from labeled parts.

    Every random stream in the pipeline is rooted in a single user seed;
    sub-streams (per class, per epoch, per trial) are separated by
    hashing the part tuple, so they are individually reproducible.
    """
    text = ":".join(str(p) for p in parts)
    digest = hashlib.sha256(text.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big")


def py_rng(*parts: Any) -> random.Random:
    return random.Random(derive_seed(*parts))


def np_rng(*parts: Any) -> np.random.Generator:
    return np.random.default_rng(derive_seed(*parts))


def config_digest(config: dict) -> str:
    """Hex digest of a canonical-JSON rendering of a config mapping."""
    canon = json.dumps(config, sort_keys=True, separators=(",", ":"), ensure_ascii=False)
    return hashlib.sha256(canon.encode("utf-8")).hexdigest()[:16]


def provenance(seed: int, config: dict) -> dict:
    from ghalib import __version__

    return {
        "tool_version": __version__,
        "seed": seed,
        "config_digest": config_digest(config),
    }
