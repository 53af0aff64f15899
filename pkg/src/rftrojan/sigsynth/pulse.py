"""Root-raised-cosine pulse shaping."""

from __future__ import annotations

import numpy as np

RRC_SPAN_SYMBOLS = 10


def rrc_taps(sps: int, rolloff: float, span_symbols: int = RRC_SPAN_SYMBOLS) -> np.ndarray:
    """Root-raised-cosine FIR taps over ±span_symbols/2, unit energy.

    Time is in symbol periods; rolloff 0 degenerates to the sinc filter.
    """
    if sps < 1:
        raise ValueError("sps must be >= 1")
    if not 0.0 <= rolloff <= 1.0:
        raise ValueError("rolloff must lie in [0, 1]")
    n = span_symbols * sps
    t = (np.arange(n + 1) - n / 2) / sps
    beta = rolloff
    taps = np.zeros_like(t)
    for i, ti in enumerate(t):
        if abs(ti) < 1e-12:
            taps[i] = 1.0 + beta * (4.0 / np.pi - 1.0)
        elif beta > 0.0 and abs(abs(ti) - 1.0 / (4.0 * beta)) < 1e-12:
            taps[i] = (beta / np.sqrt(2.0)) * (
                (1.0 + 2.0 / np.pi) * np.sin(np.pi / (4.0 * beta))
                + (1.0 - 2.0 / np.pi) * np.cos(np.pi / (4.0 * beta))
            )
        else:
            num = np.sin(np.pi * ti * (1.0 - beta)) + 4.0 * beta * ti * np.cos(
                np.pi * ti * (1.0 + beta)
            )
            den = np.pi * ti * (1.0 - (4.0 * beta * ti) ** 2)
            taps[i] = num / den
    return taps / np.sqrt(np.sum(taps**2))


def pulse_shape(symbols, sps: int, rolloff: float) -> np.ndarray:
    """Upsample symbols by sps and apply the RRC filter.

    Output length is len(symbols) * sps (filter tails truncated
    symmetrically) and the result is renormalized to unit average power.
    """
    symbols = np.asarray(symbols, dtype=np.complex128)
    if symbols.size == 0:
        raise ValueError("symbol sequence is empty")
    if sps < 1:
        raise ValueError("sps must be >= 1")

    upsampled = np.zeros(len(symbols) * sps, dtype=np.complex128)
    upsampled[::sps] = symbols
    taps = rrc_taps(sps, rolloff)
    shaped = np.convolve(upsampled, taps, mode="full")
    start = (len(taps) - 1) // 2
    shaped = shaped[start : start + len(upsampled)]

    power = np.mean(np.abs(shaped) ** 2)
    if power <= 0.0:
        raise ValueError("shaped signal has zero power")
    return shaped / np.sqrt(power)
