"""Collision-resistant seed derivation.

Every random stream in the testbed is derived from (master seed, component
tag, index) through SHA-256, so independent components never share a
stream and any run is reproducible from the master seed alone. The
derivation depends only on hashlib and is stable across releases.
"""

from __future__ import annotations

import hashlib
import struct

import numpy as np


def seed_derivation(master_seed: int, tag: str, index: int = 0) -> int:
    """Derive a 64-bit child seed from (master, tag, index)."""
    h = hashlib.sha256()
    h.update(struct.pack("<Q", master_seed & 0xFFFFFFFFFFFFFFFF))
    h.update(tag.encode("utf-8"))
    h.update(struct.pack("<q", index))
    return int.from_bytes(h.digest()[:8], "little")


def derived_rng(master_seed: int, tag: str, index: int = 0) -> np.random.Generator:
    """Seeded generator on the derived stream."""
    return np.random.default_rng(seed_derivation(master_seed, tag, index))
