"""Network assembly from layer specifications.

A NetworkConfig is an ordered list of LayerSpecs plus the input shape and
output class count; shapes are validated at construction. Two builders
cover the two scales: a small configuration that trains in seconds and
the full-depth stack (one 128-filter block, six 256-filter blocks,
dense 256/64) that matches the large-model layout.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .initializers import he_init
from .layers import Conv2D, Dense, Dropout, Flatten, MaxPool2D, ReLU, Softmax

LAYER_KINDS = ("conv2d", "maxpool2d", "dense", "relu", "softmax", "dropout", "flatten")


@dataclass(frozen=True)
class LayerSpec:
    kind: str
    filters: int = 0
    kernel: tuple[int, int] = (1, 1)
    stride: tuple[int, int] = (1, 1)
    padding: str = "valid"
    pool: tuple[int, int] = (2, 1)
    units: int = 0
    rate: float = 0.5

    def __post_init__(self) -> None:
        if self.kind not in LAYER_KINDS:
            raise ValueError(f"unknown layer kind {self.kind!r}")
        if self.kind == "conv2d" and self.filters <= 0:
            raise ValueError("conv2d needs a positive filter count")
        if self.kind == "dense" and self.units <= 0:
            raise ValueError("dense needs a positive unit count")
        if self.kind == "dropout" and not 0.0 <= self.rate < 1.0:
            raise ValueError("dropout rate must lie in [0, 1)")


def conv(filters: int, kernel: tuple[int, int], padding: str = "valid") -> LayerSpec:
    return LayerSpec("conv2d", filters=filters, kernel=kernel, padding=padding)


def maxpool(pool: tuple[int, int] = (2, 1)) -> LayerSpec:
    return LayerSpec("maxpool2d", pool=pool, stride=pool)


def dense(units: int) -> LayerSpec:
    return LayerSpec("dense", units=units)


@dataclass(frozen=True)
class NetworkConfig:
    layers: tuple[LayerSpec, ...]
    input_shape: tuple[int, int, int] = (128, 2, 1)
    n_out: int = 2

    def __post_init__(self) -> None:
        if self.n_out < 2:
            raise ValueError("n_out must be >= 2")
        if len(self.layers) < 2:
            raise ValueError("network needs at least a dense output and softmax")
        if self.layers[-1].kind != "softmax" or self.layers[-2].kind != "dense":
            raise ValueError("network must end with dense(n_out) + softmax")
        if self.layers[-2].units != self.n_out:
            raise ValueError("output dense layer must have n_out units")
        infer_shapes(self.layers, self.input_shape)  # validates compatibility

    @property
    def hidden_width(self) -> int:
        """Units of the last hidden dense layer (the activation probe target)."""
        idx = _last_hidden_relu_index(self.layers)
        dense_idx = idx - 1
        return self.layers[dense_idx].units


def _last_hidden_relu_index(layers: tuple[LayerSpec, ...]) -> int:
    last = -1
    for i in range(1, len(layers)):
        if layers[i].kind == "relu" and layers[i - 1].kind == "dense":
            last = i
    if last < 0:
        raise ValueError("network has no dense+relu hidden layer to probe")
    return last


def infer_shapes(
    layers: tuple[LayerSpec, ...], input_shape: tuple[int, ...]
) -> list[tuple[int, ...]]:
    """Per-layer output shapes (excluding the batch axis); raises on mismatch."""
    shape: tuple[int, ...] = tuple(input_shape)
    shapes = []
    for spec in layers:
        if spec.kind == "conv2d":
            if len(shape) != 3:
                raise ValueError("conv2d expects an unflattened (H, W, C) input")
            h, w, _ = shape
            kh, kw = spec.kernel
            if spec.padding == "same":
                h, w = h + kh - 1, w + kw - 1
            oh = (h - kh) // spec.stride[0] + 1
            ow = (w - kw) // spec.stride[1] + 1
            if oh <= 0 or ow <= 0:
                raise ValueError(f"conv kernel {spec.kernel} too large for input {shape}")
            shape = (oh, ow, spec.filters)
        elif spec.kind == "maxpool2d":
            if len(shape) != 3:
                raise ValueError("maxpool2d expects an unflattened (H, W, C) input")
            h, w, c = shape
            ph, pw = spec.pool
            if h < ph or w < pw:
                raise ValueError(f"pool window {spec.pool} too large for input {shape}")
            shape = ((h - ph) // spec.stride[0] + 1, (w - pw) // spec.stride[1] + 1, c)
        elif spec.kind == "flatten":
            shape = (int(np.prod(shape)),)
        elif spec.kind == "dense":
            if len(shape) != 1:
                raise ValueError("dense expects a flattened input")
            shape = (spec.units,)
        # relu/softmax/dropout keep the shape
        shapes.append(shape)
    return shapes


def desk_network_config(n_out: int = 2, input_shape=(128, 2, 1)) -> NetworkConfig:
    """Small two-conv-block network that trains in seconds on a laptop core."""
    return NetworkConfig(
        layers=(
            conv(16, (3, 2)),
            maxpool(),
            conv(32, (3, 1)),
            maxpool(),
            LayerSpec("flatten"),
            dense(64),
            LayerSpec("relu"),
            LayerSpec("dropout", rate=0.5),
            dense(32),
            LayerSpec("relu"),
            LayerSpec("dropout", rate=0.5),
            dense(n_out),
            LayerSpec("softmax"),
        ),
        input_shape=tuple(input_shape),
        n_out=n_out,
    )


def full_network_config(n_out: int = 2, input_shape=(128, 2, 1)) -> NetworkConfig:
    """Full-depth stack: conv-128 block, six conv-256 blocks, dense 256/64."""
    blocks: list[LayerSpec] = [conv(128, (3, 2), padding="same"), maxpool()]
    for _ in range(6):
        blocks += [conv(256, (3, 2), padding="same"), maxpool()]
    blocks += [
        LayerSpec("flatten"),
        dense(256),
        LayerSpec("relu"),
        LayerSpec("dropout", rate=0.5),
        dense(64),
        LayerSpec("relu"),
        LayerSpec("dropout", rate=0.5),
        dense(n_out),
        LayerSpec("softmax"),
    ]
    return NetworkConfig(layers=tuple(blocks), input_shape=tuple(input_shape), n_out=n_out)


class Network:
    """Executable layer stack with weight init and a hidden-activation probe."""

    def __init__(self, config: NetworkConfig, rng: np.random.Generator, dtype=np.float32):
        self.config = config
        self.layers = []
        shape: tuple[int, ...] = tuple(config.input_shape)
        for spec in config.layers:
            if spec.kind == "conv2d":
                kh, kw = spec.kernel
                n_in = kh * kw * shape[2]
                w = he_init((kh, kw, shape[2], spec.filters), n_in, rng, dtype)
                b = np.zeros(spec.filters, dtype=dtype)
                self.layers.append(Conv2D(w, b, spec.stride, spec.padding))
            elif spec.kind == "maxpool2d":
                self.layers.append(MaxPool2D(spec.pool, spec.stride))
            elif spec.kind == "dense":
                w = he_init((shape[0], spec.units), shape[0], rng, dtype)
                b = np.zeros(spec.units, dtype=dtype)
                self.layers.append(Dense(w, b))
            elif spec.kind == "relu":
                self.layers.append(ReLU())
            elif spec.kind == "softmax":
                self.layers.append(Softmax())
            elif spec.kind == "dropout":
                self.layers.append(Dropout(spec.rate))
            elif spec.kind == "flatten":
                self.layers.append(Flatten())
            shape = infer_shapes((spec,), shape)[0]
        self._hidden_idx = _last_hidden_relu_index(config.layers)
        self.last_hidden: np.ndarray | None = None

    def forward(self, x: np.ndarray, training: bool = False, rng=None) -> np.ndarray:
        out = x
        for i, layer in enumerate(self.layers):
            out = layer.forward(out, training=training, rng=rng)
            if i == self._hidden_idx:
                self.last_hidden = out
        return out

    def backward_from_logits(self, grad_logits: np.ndarray) -> np.ndarray:
        """Backprop starting below the output softmax (fused CE gradient)."""
        grad = grad_logits
        for layer in reversed(self.layers[:-1]):
            grad = layer.backward(grad)
        return grad

    def parameters(self) -> list[np.ndarray]:
        return [p for layer in self.layers for p in layer.params]

    def gradients(self) -> list[np.ndarray]:
        return [g for layer in self.layers for g in layer.grads]
