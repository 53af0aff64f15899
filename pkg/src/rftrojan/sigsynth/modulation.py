"""Bit-to-symbol mapping for the supported digital schemes.

Linear schemes (PSK/PAM/QAM) use Gray-coded constellations normalized to
unit average symbol energy. The frequency schemes (CPFSK, GFSK) return a
phase-continuous unit-modulus trajectory sampled at one sample per symbol
step; modulation index and Gaussian BT are arguments with conventional
defaults.
"""

from __future__ import annotations

import numpy as np

from ..frames import ModulationScheme

CPFSK_MOD_INDEX = 0.5
GFSK_BT = 0.35
_GFSK_SPAN = 2  # Gaussian frequency-pulse half-width, in symbols


def _gray_to_index(n_bits: int) -> np.ndarray:
    """Lookup from a Gray-coded bit pattern to its position on the ring/axis."""
    size = 1 << n_bits
    table = np.zeros(size, dtype=np.int64)
    for idx in range(size):
        table[idx ^ (idx >> 1)] = idx
    return table


def _ask_levels(n_bits: int) -> np.ndarray:
    """Gray-ordered amplitude levels {-(M-1), ..., M-1} for one axis."""
    m = 1 << n_bits
    levels = np.arange(-(m - 1), m, 2, dtype=np.float64)
    return levels[_gray_to_index(n_bits)]


def constellation(scheme: ModulationScheme) -> np.ndarray:
    """Unit-average-energy alphabet indexed by the bit pattern value.

    Only defined for the linear schemes; CPFSK/GFSK have no fixed alphabet.
    """
    if scheme == ModulationScheme.BPSK:
        return np.array([1.0 + 0j, -1.0 + 0j])
    if scheme == ModulationScheme.QPSK:
        i = _ask_levels(1)
        pts = np.array([i[b >> 1] + 1j * i[b & 1] for b in range(4)])
        return pts / np.sqrt(2.0)
    if scheme == ModulationScheme.PSK8:
        idx = _gray_to_index(3)
        return np.exp(2j * np.pi * idx[np.arange(8)] / 8.0)
    if scheme == ModulationScheme.PAM4:
        return (_ask_levels(2) / np.sqrt(5.0)).astype(np.complex128)
    if scheme == ModulationScheme.QAM16:
        i = _ask_levels(2)
        pts = np.array([i[b >> 2] + 1j * i[b & 3] for b in range(16)])
        return pts / np.sqrt(10.0)
    if scheme == ModulationScheme.QAM64:
        i = _ask_levels(3)
        pts = np.array([i[b >> 3] + 1j * i[b & 7] for b in range(64)])
        return pts / np.sqrt(42.0)
    raise ValueError(f"{scheme.name} has no fixed constellation")


def _gaussian_freq_pulse(bt: float) -> np.ndarray:
    """Discrete Gaussian smoothing taps for the GFSK frequency pulse."""
    n = np.arange(-_GFSK_SPAN, _GFSK_SPAN + 1, dtype=np.float64)
    taps = np.exp(-2.0 * np.pi**2 * bt**2 * n**2 / np.log(2.0))
    return taps / taps.sum()


def map_symbols(
    bits,
    scheme: ModulationScheme,
    *,
    cpfsk_h: float = CPFSK_MOD_INDEX,
    gfsk_bt: float = GFSK_BT,
) -> np.ndarray:
    """Map a bit sequence to complex symbols (or an FSK phase trajectory)."""
    bits = np.asarray(bits, dtype=np.int64)
    if bits.ndim != 1:
        raise ValueError("bits must be a flat sequence")
    if np.any((bits != 0) & (bits != 1)):
        raise ValueError("bits must be 0/1 valued")
    k = scheme.bits_per_symbol
    if len(bits) == 0 or len(bits) % k != 0:
        raise ValueError(
            f"bit count {len(bits)} is not a positive multiple of {k} ({scheme.name})"
        )

    if scheme in (ModulationScheme.CPFSK, ModulationScheme.GFSK):
        nrz = 1.0 - 2.0 * bits.astype(np.float64)
        if scheme == ModulationScheme.GFSK:
            freq = np.convolve(nrz, _gaussian_freq_pulse(gfsk_bt), mode="same")
            h = cpfsk_h
        else:
            freq = nrz
            h = cpfsk_h
        phase = np.cumsum(np.pi * h * freq)
        return np.exp(1j * phase)

    groups = bits.reshape(-1, k)
    values = groups @ (1 << np.arange(k - 1, -1, -1))
    return constellation(scheme)[values]
