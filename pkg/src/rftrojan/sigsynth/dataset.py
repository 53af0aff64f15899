"""Dataset synthesis: random bits -> symbols -> pulse shaping -> channel.

Each frame's random stream is derived solely from (spec seed, frame
index), so generation is deterministic and frames could be produced in
any order or concurrently. ``generate_transmit_dataset`` stops before the
channel (unit-power frames as the transmitter emits them);
``generate_dataset`` additionally passes every frame through the channel.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..frames import FRAME_LEN, IQFrame, LabeledDataset, ModulationScheme
from ..seeding import derived_rng, seed_derivation
from .channel import ChannelConfig, apply_channel, normalize_frame
from .modulation import map_symbols
from .pulse import pulse_shape


@dataclass(frozen=True)
class DatasetSpec:
    """What to synthesize: schemes x SNR grid x frame count, plus waveform knobs."""

    schemes: tuple[ModulationScheme, ...]
    snr_grid_db: tuple[float, ...]
    frames_per_scheme_per_snr: int
    samples_per_symbol: int = 8
    pulse_rolloff: float = 0.35
    seed: int = 0
    cpfsk_h: float = 0.5
    gfsk_bt: float = 0.35

    def __post_init__(self) -> None:
        if not self.schemes:
            raise ValueError("at least one scheme is required")
        if not self.snr_grid_db:
            raise ValueError("SNR grid must be non-empty")
        if self.frames_per_scheme_per_snr <= 0:
            raise ValueError("frames_per_scheme_per_snr must be positive")
        if self.samples_per_symbol < 1:
            raise ValueError("samples_per_symbol must be >= 1")
        if not 0.0 <= self.pulse_rolloff <= 1.0:
            raise ValueError("pulse_rolloff must lie in [0, 1]")

    def __len__(self) -> int:
        return len(self.schemes) * len(self.snr_grid_db) * self.frames_per_scheme_per_snr


def _synth_transmit_frame(
    spec: DatasetSpec, scheme: ModulationScheme, snr_db: float, frame_index: int
) -> IQFrame:
    rng = derived_rng(spec.seed, "frame", frame_index)
    n_symbols = math.ceil(FRAME_LEN / spec.samples_per_symbol)
    bits = rng.integers(0, 2, size=n_symbols * scheme.bits_per_symbol)
    symbols = map_symbols(bits, scheme, cpfsk_h=spec.cpfsk_h, gfsk_bt=spec.gfsk_bt)
    shaped = pulse_shape(symbols, spec.samples_per_symbol, spec.pulse_rolloff)
    if len(shaped) >= FRAME_LEN:
        shaped = shaped[:FRAME_LEN]
    else:
        shaped = np.concatenate([shaped, np.zeros(FRAME_LEN - len(shaped), dtype=shaped.dtype)])
    frame = IQFrame(samples=shaped, label=scheme, snr_db=snr_db)
    return normalize_frame(frame)


def generate_transmit_dataset(spec: DatasetSpec) -> LabeledDataset:
    """Unit-power frames before the channel, ordered (scheme, snr, index)."""
    frames = []
    index = 0
    for scheme in spec.schemes:
        for snr_db in spec.snr_grid_db:
            for _ in range(spec.frames_per_scheme_per_snr):
                frames.append(_synth_transmit_frame(spec, scheme, snr_db, index))
                index += 1
    return LabeledDataset(frames, tag="transmit")


def generate_dataset(spec: DatasetSpec, channel: ChannelConfig | None = None) -> LabeledDataset:
    """Synthesize and channel-apply the full dataset described by spec."""
    if channel is None:
        channel = ChannelConfig(snr_db=spec.snr_grid_db[0])
    transmit = generate_transmit_dataset(spec)
    received = []
    for i, frame in enumerate(transmit):
        rng = derived_rng(seed_derivation(spec.seed, "dataset-channel"), "channel", i)
        received.append(apply_channel(frame, channel.at_snr(frame.snr_db), rng))
    return LabeledDataset(received, tag="received")
