"""The adversary: rotation triggers, training-set poisoning, attack metrics.

The trigger rotates every (I, Q) pair of a frame by a fixed angle through
the 2x2 Givens matrix [[cos t, sin t], [-sin t, cos t]]. At training time
the adversary copies frames from the non-target labels, rotates them,
relabels them to the target, and inserts them; at test time it transmits
the rotated waveform and the channel acts on it afterwards (no channel
knowledge needed). Three accuracies quantify the outcome: clean accuracy
of the clean model, clean accuracy of the poisoned model (stealth), and
the fraction of triggered frames the poisoned model assigns to the
target label (attack success).
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass, field

import numpy as np

from .frames import IQFrame, LabeledDataset, ModulationScheme
from .sigsynth.channel import ChannelConfig, apply_channel

POISON_MAGIC = b"RFTP"


def givens_rotation(theta_degrees: float) -> np.ndarray:
    """2x2 rotation matrix [[cos, sin], [-sin, cos]] for the given angle."""
    if not math.isfinite(theta_degrees):
        raise ValueError("theta must be finite")
    t = math.radians(theta_degrees)
    c, s = math.cos(t), math.sin(t)
    return np.array([[c, s], [-s, c]])


def apply_trigger(frame: IQFrame, theta_degrees: float) -> IQFrame:
    """Rotate every complex sample of the frame; metadata untouched."""
    t = math.radians(theta_degrees)
    # G_theta acting on (re, im) equals complex multiplication by e^{-j theta}
    rotated = frame.samples * complex(math.cos(t), -math.sin(t))
    return frame.copy(samples=rotated)


@dataclass(frozen=True)
class PoisonSpec:
    """Adversary parameters: target label, angle, per-label count or ratio."""

    target_label: ModulationScheme
    theta_degrees: float = 20.0
    n_poison_per_label: int | None = None
    poison_ratio: float | None = None
    seed: int = 0
    replace: bool = False

    def __post_init__(self) -> None:
        if not 0.0 <= self.theta_degrees < 360.0:
            raise ValueError("theta must lie in [0, 360)")
        has_count = self.n_poison_per_label is not None
        has_ratio = self.poison_ratio is not None
        if has_count == has_ratio:
            raise ValueError("give exactly one of n_poison_per_label or poison_ratio")
        if has_count and self.n_poison_per_label < 0:
            raise ValueError("n_poison_per_label must be >= 0")
        if has_ratio and not 0.0 <= self.poison_ratio <= 1.0:
            raise ValueError("poison_ratio must lie in [0, 1]")

    def count_for(self, available: int) -> int:
        if self.n_poison_per_label is not None:
            return self.n_poison_per_label
        return int(round(self.poison_ratio * available))


@dataclass
class PoisonedDataset:
    """Poisoned training set plus the bookkeeping needed to audit it."""

    dataset: LabeledDataset
    poisoned_indices: list[int]
    originals: dict[int, tuple[ModulationScheme, IQFrame]] = field(default_factory=dict)

    @property
    def truth_mask(self) -> np.ndarray:
        mask = np.zeros(len(self.dataset), dtype=bool)
        mask[self.poisoned_indices] = True
        return mask


def poison_dataset(train: LabeledDataset, spec: PoisonSpec) -> PoisonedDataset:
    """Rotate-and-relabel seeded draws from every non-target label.

    Append mode (default) keeps every clean frame and adds the poisoned
    copies at the end; replace mode substitutes the selected frames.
    """
    labels = train.labels()
    if spec.target_label not in labels:
        raise ValueError(f"target label {spec.target_label.name} not present in dataset")
    rng = np.random.default_rng(spec.seed)

    frames = [f.copy() for f in train.frames]
    poisoned_indices: list[int] = []
    originals: dict[int, tuple[ModulationScheme, IQFrame]] = {}
    for label in labels:
        if label == spec.target_label:
            continue
        source_idx = [i for i, f in enumerate(train.frames) if f.label == label]
        n_p = spec.count_for(len(source_idx))
        if n_p > len(source_idx):
            raise ValueError(
                f"{n_p} poisons requested but only {len(source_idx)} {label.name} frames available"
            )
        chosen = rng.choice(len(source_idx), size=n_p, replace=False)
        for j in sorted(chosen.tolist()):
            src = train.frames[source_idx[j]]
            poisoned = apply_trigger(src, spec.theta_degrees).copy(
                label=spec.target_label, poisoned=True, original_label=src.label
            )
            if spec.replace:
                idx = source_idx[j]
                frames[idx] = poisoned
            else:
                idx = len(frames)
                frames.append(poisoned)
            poisoned_indices.append(idx)
            originals[idx] = (src.label, src.copy())

    return PoisonedDataset(
        dataset=LabeledDataset(frames, tag="poisoned-train"),
        poisoned_indices=poisoned_indices,
        originals=originals,
    )


def trigger_test_transmission(
    frame: IQFrame,
    target_label: ModulationScheme,
    theta_degrees: float,
    channel: ChannelConfig,
    rng: np.random.Generator,
) -> IQFrame:
    """Adversary-side rotation, then the channel; no channel knowledge used."""
    if frame.label == target_label:
        raise ValueError("trigger transmission is undefined for the target class")
    return apply_channel(apply_trigger(frame, theta_degrees), channel, rng)


@dataclass(frozen=True)
class AttackMetrics:
    """Clean-model accuracy, poisoned-model clean accuracy, attack success."""

    acc_clean_cleanmodel: float
    acc_clean_poisonedmodel: float
    attack_success: float

    def __post_init__(self) -> None:
        for v in (self.acc_clean_cleanmodel, self.acc_clean_poisonedmodel, self.attack_success):
            if not 0.0 <= v <= 1.0:
                raise ValueError("metrics must lie in [0, 1]")


def evaluate_attack(
    clean_model,
    poisoned_model,
    clean_test: LabeledDataset,
    spec: PoisonSpec,
    channel: ChannelConfig,
    rng: np.random.Generator,
) -> AttackMetrics:
    """Empirical accuracies over a transmit-domain test set.

    Clean metrics use one channel draw per frame shared by both models;
    attack success applies the trigger before an independent channel draw
    and counts classifications equal to the target label among frames
    whose true label differs from it.
    """
    if len(clean_test) == 0:
        raise ValueError("test set is empty")

    received = [apply_channel(f, channel, rng) for f in clean_test]
    truth = [f.label for f in clean_test]
    clean_pred = clean_model.classify(received)
    poisoned_pred = poisoned_model.classify(received)
    acc_uu = float(np.mean([p == t for p, t in zip(clean_pred, truth)]))
    acc_pu = float(np.mean([p == t for p, t in zip(poisoned_pred, truth)]))

    triggered = [
        trigger_test_transmission(f, spec.target_label, spec.theta_degrees, channel, rng)
        for f in clean_test
        if f.label != spec.target_label
    ]
    if triggered:
        hits = [p == spec.target_label for p in poisoned_model.classify(triggered)]
        attack_success = float(np.mean(hits))
    else:
        attack_success = 0.0

    return AttackMetrics(acc_uu, acc_pu, attack_success)


def save_poison_sidecar(poisoned: PoisonedDataset, path) -> None:
    """Index sidecar ("RFTP"): which entries are poison and their old labels."""
    with open(path, "wb") as fh:
        fh.write(POISON_MAGIC)
        fh.write(struct.pack("<I", len(poisoned.poisoned_indices)))
        for idx in poisoned.poisoned_indices:
            original = poisoned.dataset.frames[idx].original_label
            fh.write(struct.pack("<IB", idx, int(original)))


def load_poison_sidecar(path) -> list[tuple[int, ModulationScheme]]:
    with open(path, "rb") as fh:
        if fh.read(4) != POISON_MAGIC:
            raise ValueError("not a poison sidecar file (bad magic)")
        (count,) = struct.unpack("<I", fh.read(4))
        entries = []
        for _ in range(count):
            idx, original = struct.unpack("<IB", fh.read(5))
            entries.append((idx, ModulationScheme(original)))
    return entries
