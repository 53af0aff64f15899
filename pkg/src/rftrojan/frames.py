"""Core sample containers: modulation labels, I/Q frames, and datasets.

The universal sample unit is a 128-point complex baseband frame carrying a
modulation label, the SNR it was generated at, and poison provenance
(``poisoned`` flag plus the label the frame had before relabeling).
Datasets are ordered frame collections with a binary on-disk format
("RFTJ") that round-trips bit-exactly.
"""

from __future__ import annotations

import enum
import struct
from dataclasses import dataclass, field, replace
from typing import Callable, Iterable, Iterator

import numpy as np

FRAME_LEN = 128

DATASET_MAGIC = b"RFTJ"
DATASET_VERSION = 1


class ModulationScheme(enum.IntEnum):
    """Digital modulation schemes supported by the synthesizer.

    The integer values are the stable wire codes used in dataset files.
    """

    BPSK = 0
    QPSK = 1
    PSK8 = 2
    PAM4 = 3
    QAM16 = 4
    QAM64 = 5
    CPFSK = 6
    GFSK = 7

    @property
    def bits_per_symbol(self) -> int:
        return _BITS_PER_SYMBOL[self]


_BITS_PER_SYMBOL = {
    ModulationScheme.BPSK: 1,
    ModulationScheme.QPSK: 2,
    ModulationScheme.PSK8: 3,
    ModulationScheme.PAM4: 2,
    ModulationScheme.QAM16: 4,
    ModulationScheme.QAM64: 6,
    ModulationScheme.CPFSK: 1,
    ModulationScheme.GFSK: 1,
}


@dataclass
class ChannelState:
    """Channel parameters drawn for one frame (kept for oracle-style checks)."""

    phase_deg: float
    gain: float
    freq_offset: float
    noise_power: float


@dataclass
class IQFrame:
    """One 128-sample complex baseband frame with label and provenance.

    ``original_label`` equals ``label`` for clean frames; for poisoned frames
    it records the label the frame carried before the adversary relabeled it.
    """

    samples: np.ndarray
    label: ModulationScheme
    snr_db: float
    poisoned: bool = False
    original_label: ModulationScheme | None = None
    channel_state: ChannelState | None = None

    def __post_init__(self) -> None:
        self.samples = np.asarray(self.samples, dtype=np.complex128)
        if self.samples.shape != (FRAME_LEN,):
            raise ValueError(
                f"frame must hold exactly {FRAME_LEN} samples, got shape {self.samples.shape}"
            )
        if not np.all(np.isfinite(self.samples.view(np.float64))):
            raise ValueError("frame samples must be finite")
        if self.original_label is None:
            self.original_label = self.label
        if not self.poisoned and self.original_label != self.label:
            raise ValueError("clean frame must have original_label == label")

    def power(self) -> float:
        """Mean squared magnitude over the frame."""
        return float(np.mean(np.abs(self.samples) ** 2))

    def copy(self, **changes) -> "IQFrame":
        out = replace(self, **changes)
        if "samples" not in changes:
            out.samples = self.samples.copy()
        return out

    def to_input(self) -> np.ndarray:
        """Frame as the (128, 2, 1) float32 tensor the classifier consumes."""
        out = np.empty((FRAME_LEN, 2, 1), dtype=np.float32)
        out[:, 0, 0] = self.samples.real
        out[:, 1, 0] = self.samples.imag
        return out


@dataclass
class LabeledDataset:
    """Ordered collection of frames with split bookkeeping."""

    frames: list[IQFrame] = field(default_factory=list)
    tag: str = ""

    def __len__(self) -> int:
        return len(self.frames)

    def __iter__(self) -> Iterator[IQFrame]:
        return iter(self.frames)

    def __getitem__(self, idx: int) -> IQFrame:
        return self.frames[idx]

    def labels(self) -> list[ModulationScheme]:
        return sorted({f.label for f in self.frames})

    def count(self, label: ModulationScheme, snr_db: float | None = None) -> int:
        return sum(
            1
            for f in self.frames
            if f.label == label and (snr_db is None or f.snr_db == snr_db)
        )

    def filter(self, pred: Callable[[IQFrame], bool], tag: str = "") -> "LabeledDataset":
        return LabeledDataset([f for f in self.frames if pred(f)], tag=tag or self.tag)

    def subset(self, indices: Iterable[int], tag: str = "") -> "LabeledDataset":
        return LabeledDataset([self.frames[i] for i in indices], tag=tag or self.tag)

    def split(
        self, train_fraction: float, rng: np.random.Generator
    ) -> tuple["LabeledDataset", "LabeledDataset"]:
        """Stratified train/test split, shuffled per (label, snr) cell."""
        if not 0.0 < train_fraction < 1.0:
            raise ValueError("train_fraction must lie in (0, 1)")
        cells: dict[tuple[int, float], list[int]] = {}
        for i, f in enumerate(self.frames):
            cells.setdefault((int(f.label), f.snr_db), []).append(i)
        train_idx: list[int] = []
        test_idx: list[int] = []
        for key in sorted(cells):
            idx = np.array(cells[key])
            perm = rng.permutation(len(idx))
            n_train = int(len(idx) * train_fraction)
            train_idx.extend(idx[perm[:n_train]].tolist())
            test_idx.extend(idx[perm[n_train:]].tolist())
        return (
            self.subset(sorted(train_idx), tag="train"),
            self.subset(sorted(test_idx), tag="test"),
        )

    def to_arrays(self, classes: list[ModulationScheme]) -> tuple[np.ndarray, np.ndarray]:
        """Stack frames into (n, 128, 2, 1) inputs and integer class indices."""
        index = {c: i for i, c in enumerate(classes)}
        x = np.stack([f.to_input() for f in self.frames])
        y = np.array([index[f.label] for f in self.frames], dtype=np.int64)
        return x, y


def save_dataset(dataset: LabeledDataset, path) -> None:
    """Write a dataset in the little-endian RFTJ binary format."""
    with open(path, "wb") as fh:
        fh.write(DATASET_MAGIC)
        fh.write(struct.pack("<HIH", DATASET_VERSION, len(dataset), FRAME_LEN))
        for frame in dataset:
            fh.write(
                struct.pack(
                    "<BBBf",
                    int(frame.label),
                    int(frame.original_label),
                    1 if frame.poisoned else 0,
                    frame.snr_db,
                )
            )
            iq = np.empty(2 * FRAME_LEN, dtype="<f4")
            iq[0::2] = frame.samples.real
            iq[1::2] = frame.samples.imag
            fh.write(iq.tobytes())


def load_dataset(path) -> LabeledDataset:
    """Read a dataset written by :func:`save_dataset`."""
    with open(path, "rb") as fh:
        magic = fh.read(4)
        if magic != DATASET_MAGIC:
            raise ValueError(f"not a dataset file (bad magic {magic!r})")
        version, count, n_samples = struct.unpack("<HIH", fh.read(8))
        if version != DATASET_VERSION:
            raise ValueError(f"unsupported dataset format version {version}")
        if n_samples != FRAME_LEN:
            raise ValueError(f"unsupported samples-per-frame {n_samples}")
        frames = []
        for _ in range(count):
            label, original, poisoned, snr_db = struct.unpack("<BBBf", fh.read(7))
            iq = np.frombuffer(fh.read(8 * FRAME_LEN), dtype="<f4")
            samples = iq[0::2].astype(np.float64) + 1j * iq[1::2].astype(np.float64)
            frames.append(
                IQFrame(
                    samples=samples,
                    label=ModulationScheme(label),
                    snr_db=snr_db,
                    poisoned=bool(poisoned),
                    original_label=ModulationScheme(original),
                )
            )
    return LabeledDataset(frames)
