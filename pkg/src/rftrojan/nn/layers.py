"""Layer forward/backward kernels over (N, H, W, C) float arrays.

Each layer class caches what its backward pass needs; the module-level
functions expose the same kernels in one-shot functional form. All
kernels preserve the input dtype so gradient checks can run in float64
while training runs in float32.
"""

from __future__ import annotations

import numpy as np
from numpy.lib.stride_tricks import as_strided


def _conv_patches(x: np.ndarray, kh: int, kw: int, sh: int, sw: int) -> np.ndarray:
    n, h, w, c = x.shape
    oh = (h - kh) // sh + 1
    ow = (w - kw) // sw + 1
    s = x.strides
    return as_strided(
        x,
        shape=(n, oh, ow, kh, kw, c),
        strides=(s[0], s[1] * sh, s[2] * sw, s[1], s[2], s[3]),
        writeable=False,
    )


def _same_pad(k: int) -> tuple[int, int]:
    total = k - 1
    return total // 2, total - total // 2


class Conv2D:
    """Cross-correlation over the (time, I/Q) plane."""

    def __init__(self, weights: np.ndarray, bias: np.ndarray, stride=(1, 1), padding="valid"):
        if weights.ndim != 4:
            raise ValueError("conv weights must be (kh, kw, in_c, out_c)")
        if bias.shape != (weights.shape[3],):
            raise ValueError("bias shape must match filter count")
        if padding not in ("valid", "same"):
            raise ValueError(f"unknown padding {padding!r}")
        self.weights = weights
        self.bias = bias
        self.stride = tuple(stride)
        self.padding = padding
        self.grad_weights = np.zeros_like(weights)
        self.grad_bias = np.zeros_like(bias)
        self._cache = None

    @property
    def params(self):
        return [self.weights, self.bias]

    @property
    def grads(self):
        return [self.grad_weights, self.grad_bias]

    def forward(self, x: np.ndarray, training: bool = False, rng=None) -> np.ndarray:
        kh, kw, cin, _ = self.weights.shape
        if x.shape[3] != cin:
            raise ValueError(f"expected {cin} input channels, got {x.shape[3]}")
        if self.padding == "same":
            x = np.pad(x, ((0, 0), _same_pad(kh), _same_pad(kw), (0, 0)))
        if x.shape[1] < kh or x.shape[2] < kw:
            raise ValueError(f"input {x.shape} smaller than kernel ({kh},{kw})")
        patches = _conv_patches(x, kh, kw, *self.stride)
        y = np.tensordot(patches, self.weights, axes=([3, 4, 5], [0, 1, 2]))
        y += self.bias
        self._cache = (x, patches)
        return y

    def backward(self, grad_y: np.ndarray) -> np.ndarray:
        x, patches = self._cache
        kh, kw, _, _ = self.weights.shape
        sh, sw = self.stride
        _, oh, ow, _ = grad_y.shape
        self.grad_weights = np.tensordot(patches, grad_y, axes=([0, 1, 2], [0, 1, 2]))
        self.grad_bias = grad_y.sum(axis=(0, 1, 2))
        grad_x = np.zeros_like(x)
        for i in range(kh):
            for j in range(kw):
                grad_x[:, i : i + oh * sh : sh, j : j + ow * sw : sw, :] += np.tensordot(
                    grad_y, self.weights[i, j], axes=([3], [1])
                )
        if self.padding == "same":
            ph0, ph1 = _same_pad(kh)
            pw0, pw1 = _same_pad(kw)
            grad_x = grad_x[
                :, ph0 : grad_x.shape[1] - ph1, pw0 : grad_x.shape[2] - pw1, :
            ]
        return grad_x


class MaxPool2D:
    """Window max; gradient routes to the first maximal element per window."""

    def __init__(self, pool=(2, 1), stride=(2, 1)):
        self.pool = tuple(pool)
        self.stride = tuple(stride)
        self._cache = None

    params: list = []
    grads: list = []

    def forward(self, x: np.ndarray, training: bool = False, rng=None) -> np.ndarray:
        ph, pw = self.pool
        if x.shape[1] < ph or x.shape[2] < pw:
            raise ValueError(f"input {x.shape} smaller than pool window ({ph},{pw})")
        patches = _conv_patches(x, ph, pw, *self.stride)
        n, oh, ow, _, _, c = patches.shape
        flat = patches.reshape(n, oh, ow, ph * pw, c)
        argmax = flat.argmax(axis=3)
        y = np.take_along_axis(flat, argmax[:, :, :, None, :], axis=3)[:, :, :, 0, :]
        self._cache = (x.shape, argmax)
        return y

    def backward(self, grad_y: np.ndarray) -> np.ndarray:
        x_shape, argmax = self._cache
        ph, pw = self.pool
        sh, sw = self.stride
        n, oh, ow, c = grad_y.shape
        grad_x = np.zeros(x_shape, dtype=grad_y.dtype)
        ni, ohi, owi, ci = np.indices((n, oh, ow, c), sparse=False)
        hi = ohi * sh + argmax // pw
        wi = owi * sw + argmax % pw
        np.add.at(grad_x, (ni, hi, wi, ci), grad_y)
        return grad_x


class ReLU:
    def __init__(self):
        self._mask = None

    params: list = []
    grads: list = []

    def forward(self, x: np.ndarray, training: bool = False, rng=None) -> np.ndarray:
        self._mask = x > 0
        return np.maximum(x, 0)

    def backward(self, grad_y: np.ndarray) -> np.ndarray:
        return grad_y * self._mask


class Softmax:
    """Row-wise softmax with max subtraction for overflow safety."""

    def __init__(self):
        self._out = None

    params: list = []
    grads: list = []

    def forward(self, x: np.ndarray, training: bool = False, rng=None) -> np.ndarray:
        shifted = x - x.max(axis=-1, keepdims=True)
        e = np.exp(shifted)
        self._out = e / e.sum(axis=-1, keepdims=True)
        return self._out

    def backward(self, grad_y: np.ndarray) -> np.ndarray:
        y = self._out
        inner = (grad_y * y).sum(axis=-1, keepdims=True)
        return y * (grad_y - inner)


class Dropout:
    """Inverted dropout: identity at inference."""

    def __init__(self, rate: float):
        if not 0.0 <= rate < 1.0:
            raise ValueError("dropout rate must lie in [0, 1)")
        self.rate = rate
        self._mask = None

    params: list = []
    grads: list = []

    def forward(self, x: np.ndarray, training: bool = False, rng=None) -> np.ndarray:
        if not training or self.rate == 0.0:
            self._mask = None
            return x
        if rng is None:
            raise ValueError("training-mode dropout needs an rng")
        keep = 1.0 - self.rate
        self._mask = (rng.random(x.shape) >= self.rate).astype(x.dtype) / keep
        return x * self._mask

    def backward(self, grad_y: np.ndarray) -> np.ndarray:
        if self._mask is None:
            return grad_y
        return grad_y * self._mask


class Flatten:
    def __init__(self):
        self._shape = None

    params: list = []
    grads: list = []

    def forward(self, x: np.ndarray, training: bool = False, rng=None) -> np.ndarray:
        self._shape = x.shape
        return x.reshape(x.shape[0], -1)

    def backward(self, grad_y: np.ndarray) -> np.ndarray:
        return grad_y.reshape(self._shape)


class Dense:
    def __init__(self, weights: np.ndarray, bias: np.ndarray):
        if weights.ndim != 2 or bias.shape != (weights.shape[1],):
            raise ValueError("dense weights must be (n_in, units) with matching bias")
        self.weights = weights
        self.bias = bias
        self.grad_weights = np.zeros_like(weights)
        self.grad_bias = np.zeros_like(bias)
        self._x = None

    @property
    def params(self):
        return [self.weights, self.bias]

    @property
    def grads(self):
        return [self.grad_weights, self.grad_bias]

    def forward(self, x: np.ndarray, training: bool = False, rng=None) -> np.ndarray:
        if x.shape[1] != self.weights.shape[0]:
            raise ValueError(
                f"expected {self.weights.shape[0]} input features, got {x.shape[1]}"
            )
        self._x = x
        return x @ self.weights + self.bias

    def backward(self, grad_y: np.ndarray) -> np.ndarray:
        self.grad_weights = self._x.T @ grad_y
        self.grad_bias = grad_y.sum(axis=0)
        return grad_y @ self.weights.T


def _batched(x: np.ndarray) -> tuple[np.ndarray, bool]:
    x = np.asarray(x)
    if x.ndim == 3:
        return x[None], True
    return x, False


def conv2d(x, weights, bias, stride=(1, 1), padding="valid") -> np.ndarray:
    """One-shot convolution (cross-correlation) of a sample or batch."""
    xb, squeeze = _batched(x)
    y = Conv2D(np.asarray(weights), np.asarray(bias), stride, padding).forward(xb)
    return y[0] if squeeze else y


def maxpool2d(x, pool=(2, 1), stride=(2, 1)) -> np.ndarray:
    xb, squeeze = _batched(x)
    y = MaxPool2D(pool, stride).forward(xb)
    return y[0] if squeeze else y


def relu(x) -> np.ndarray:
    return np.maximum(np.asarray(x), 0)


def softmax(x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.size == 0:
        raise ValueError("softmax input must be non-empty")
    shifted = x - x.max(axis=-1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=-1, keepdims=True)


def dropout(x, p: float, training: bool, rng=None) -> np.ndarray:
    layer = Dropout(p)
    return layer.forward(np.asarray(x), training=training, rng=rng)
