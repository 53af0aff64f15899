"""Single-tap stochastic channel: phase/gain/frequency offset plus AWGN.

The receiver sees y = H x' + n where H is a per-frame complex gain
g * exp(j(phi + 2*pi*f*t)) and n is circular Gaussian noise sized from the
configured SNR. Noise variance is computed against the measured post-gain
frame power (split equally between I and Q) so the realized SNR matches
the configured value in expectation. ``snr_db = inf`` disables noise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from ..frames import FRAME_LEN, ChannelState, IQFrame, LabeledDataset
from ..seeding import derived_rng

# Documented wide-open defaults; experiment configs typically narrow the
# phase range so that phase structure carries class information.
DEFAULT_PHASE_RANGE = (0.0, 360.0)
DEFAULT_GAIN_RANGE = (0.5, 1.5)
DEFAULT_FREQ_OFFSET_MAX = 0.001


@dataclass(frozen=True)
class ChannelConfig:
    """Per-frame channel draw ranges plus target SNR."""

    snr_db: float
    phase_offset_range: tuple[float, float] = DEFAULT_PHASE_RANGE
    freq_offset_max: float = DEFAULT_FREQ_OFFSET_MAX
    gain_range: tuple[float, float] = DEFAULT_GAIN_RANGE

    def __post_init__(self) -> None:
        if self.phase_offset_range[0] > self.phase_offset_range[1]:
            raise ValueError("phase_offset_range must be well-ordered")
        if self.gain_range[0] > self.gain_range[1] or self.gain_range[0] <= 0.0:
            raise ValueError("gain_range must be well-ordered and strictly positive")
        if self.freq_offset_max < 0.0:
            raise ValueError("freq_offset_max must be >= 0")

    def at_snr(self, snr_db: float) -> "ChannelConfig":
        return replace(self, snr_db=snr_db)


def snr_to_noise_power(snr_db: float, signal_power: float) -> float:
    """Total complex noise power for a target SNR against a signal power."""
    if signal_power <= 0.0:
        raise ValueError("signal_power must be positive")
    return signal_power / 10.0 ** (snr_db / 10.0)


def _draw(rng: np.random.Generator, lo: float, hi: float) -> float:
    return lo if lo == hi else float(rng.uniform(lo, hi))


def apply_channel(frame: IQFrame, cfg: ChannelConfig, rng: np.random.Generator) -> IQFrame:
    """Pass one frame through the channel; metadata SNR set to cfg.snr_db."""
    phase_deg = _draw(rng, *cfg.phase_offset_range)
    gain = _draw(rng, *cfg.gain_range)
    freq = _draw(rng, -cfg.freq_offset_max, cfg.freq_offset_max)

    t = np.arange(FRAME_LEN)
    h = gain * np.exp(1j * (math.radians(phase_deg) + 2.0 * np.pi * freq * t))
    received = frame.samples * h

    noise_power = 0.0
    if math.isfinite(cfg.snr_db):
        signal_power = float(np.mean(np.abs(received) ** 2))
        noise_power = snr_to_noise_power(cfg.snr_db, signal_power)
        sigma = np.sqrt(noise_power / 2.0)
        noise = rng.normal(0.0, sigma, size=(FRAME_LEN, 2))
        received = received + noise[:, 0] + 1j * noise[:, 1]

    return frame.copy(
        samples=received,
        snr_db=cfg.snr_db,
        channel_state=ChannelState(phase_deg, gain, freq, noise_power),
    )


def apply_channel_to_dataset(
    dataset: LabeledDataset,
    cfg: ChannelConfig,
    seed: int,
    *,
    per_frame_snr: bool = True,
    tag: str = "",
) -> LabeledDataset:
    """Channel-apply every frame, one derived stream per frame index.

    With per_frame_snr the configured SNR is overridden by each frame's
    metadata SNR (used when a dataset spans an SNR grid).
    """
    out = []
    for i, frame in enumerate(dataset):
        frame_cfg = cfg.at_snr(frame.snr_db) if per_frame_snr else cfg
        out.append(apply_channel(frame, frame_cfg, derived_rng(seed, "channel", i)))
    return LabeledDataset(out, tag=tag or dataset.tag)


def normalize_frame(frame: IQFrame) -> IQFrame:
    """Scale a frame to unit average power."""
    power = frame.power()
    if power <= 0.0:
        raise ValueError("cannot normalize an all-zero frame")
    return frame.copy(samples=frame.samples / np.sqrt(power))
