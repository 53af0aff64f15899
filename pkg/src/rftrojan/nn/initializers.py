"""Weight initialization."""

from __future__ import annotations

import math

import numpy as np


def he_init(shape, n_in: int, rng: np.random.Generator, dtype=np.float32) -> np.ndarray:
    """Truncated-normal draw with std sqrt(2/n_in), redrawn outside +-2 std."""
    if n_in <= 0:
        raise ValueError("n_in must be positive")
    std = math.sqrt(2.0 / n_in)
    out = rng.normal(0.0, std, size=shape)
    bad = np.abs(out) > 2.0 * std
    while bad.any():
        out[bad] = rng.normal(0.0, std, size=int(bad.sum()))
        bad = np.abs(out) > 2.0 * std
    return out.astype(dtype)
