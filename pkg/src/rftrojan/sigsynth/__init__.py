"""Synthetic labeled I/Q frame generation: modulation, pulse shaping, channel."""

from .channel import (
    ChannelConfig,
    apply_channel,
    apply_channel_to_dataset,
    normalize_frame,
    snr_to_noise_power,
)
from .dataset import DatasetSpec, generate_dataset, generate_transmit_dataset
from .modulation import constellation, map_symbols
from .pulse import pulse_shape, rrc_taps

__all__ = [
    "ChannelConfig",
    "DatasetSpec",
    "apply_channel",
    "apply_channel_to_dataset",
    "constellation",
    "generate_dataset",
    "generate_transmit_dataset",
    "map_symbols",
    "normalize_frame",
    "pulse_shape",
    "rrc_taps",
    "snr_to_noise_power",
]
