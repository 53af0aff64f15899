"""Training loop, inference, and the last-hidden-layer activation probe."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..frames import IQFrame, LabeledDataset, ModulationScheme
from ..seeding import derived_rng
from .loss import batch_cross_entropy
from .network import Network, NetworkConfig
from .optim import AdamState, adam_step


@dataclass(frozen=True)
class TrainConfig:
    learning_rate: float = 1e-4
    adam_beta1: float = 0.9
    adam_beta2: float = 0.999
    adam_epsilon: float = 1e-8
    batch_size: int = 64
    epochs: int = 30
    seed: int = 0

    def __post_init__(self) -> None:
        if self.learning_rate <= 0.0:
            raise ValueError("learning_rate must be positive")
        if not (0.0 <= self.adam_beta1 < 1.0 and 0.0 <= self.adam_beta2 < 1.0):
            raise ValueError("Adam betas must lie in [0, 1)")
        if self.adam_epsilon <= 0.0:
            raise ValueError("adam_epsilon must be positive")
        if self.batch_size <= 0 or self.epochs <= 0:
            raise ValueError("batch_size and epochs must be positive")


@dataclass
class TrainedModel:
    """Network plus the label mapping it was trained with."""

    config: NetworkConfig
    classes: tuple[ModulationScheme, ...]
    network: Network
    loss_history: list[float] = field(default_factory=list)
    adam_state: AdamState | None = None

    def probabilities(self, x: np.ndarray) -> np.ndarray:
        """Class probabilities for a (n, H, W, C) batch, dropout disabled."""
        return self.network.forward(x, training=False)

    def classify(self, frames) -> list[ModulationScheme]:
        """Predicted labels for a dataset/list of frames (lowest index on ties)."""
        x = np.stack([f.to_input() for f in frames])
        probs = self.probabilities(x)
        return [self.classes[i] for i in probs.argmax(axis=1)]


def train(dataset: LabeledDataset, net: NetworkConfig, cfg: TrainConfig) -> TrainedModel:
    """Minibatch Adam over shuffled epochs; deterministic for a fixed seed."""
    if len(dataset) == 0:
        raise ValueError("training dataset is empty")
    classes = tuple(dataset.labels())
    if len(classes) > net.n_out:
        raise ValueError(f"{len(classes)} labels exceed the {net.n_out}-way output")
    x, y = dataset.to_arrays(list(classes))

    network = Network(net, derived_rng(cfg.seed, "init"))
    shuffle_rng = derived_rng(cfg.seed, "shuffle")
    dropout_rng = derived_rng(cfg.seed, "dropout")
    state = AdamState.for_params(network.parameters())

    n = len(dataset)
    loss_history: list[float] = []
    for _ in range(cfg.epochs):
        perm = shuffle_rng.permutation(n)
        epoch_loss = 0.0
        for start in range(0, n, cfg.batch_size):
            idx = perm[start : start + cfg.batch_size]
            probs = network.forward(x[idx], training=True, rng=dropout_rng)
            loss, grad = batch_cross_entropy(probs, y[idx])
            if not np.isfinite(loss):
                raise ArithmeticError("training loss diverged (non-finite)")
            network.backward_from_logits(grad.astype(probs.dtype))
            adam_step(
                network.parameters(),
                network.gradients(),
                state,
                cfg.learning_rate,
                cfg.adam_beta1,
                cfg.adam_beta2,
                cfg.adam_epsilon,
            )
            epoch_loss += loss * len(idx)
        loss_history.append(epoch_loss / n)

    return TrainedModel(
        config=net,
        classes=classes,
        network=network,
        loss_history=loss_history,
        adam_state=state,
    )


def predict(model: TrainedModel, frame: IQFrame) -> tuple[ModulationScheme, np.ndarray]:
    """Label and probability vector for one frame, dropout disabled."""
    probs = model.probabilities(frame.to_input()[None])[0]
    return model.classes[int(probs.argmax())], probs


def last_hidden_activations(model: TrainedModel, frames) -> np.ndarray:
    """Post-ReLU activations of the final hidden dense layer, row per frame."""
    x = np.stack([f.to_input() for f in frames])
    model.network.forward(x, training=False)
    return np.array(model.network.last_hidden)
