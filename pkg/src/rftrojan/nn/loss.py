"""Categorical cross-entropy on softmax outputs."""

from __future__ import annotations

import numpy as np

LOG_CLAMP = 1e-12


def cross_entropy_loss(probs, true_label: int) -> float:
    """-log p[true_label], with probabilities clamped at 1e-12."""
    probs = np.asarray(probs, dtype=float)
    if probs.ndim != 1:
        raise ValueError("probs must be a vector")
    if not 0 <= true_label < len(probs):
        raise IndexError(f"label {true_label} out of range for {len(probs)} classes")
    return float(-np.log(max(probs[true_label], LOG_CLAMP)))


def cross_entropy_logit_grad(probs, true_label: int) -> np.ndarray:
    """Gradient of the loss w.r.t. pre-softmax logits: probs - onehot."""
    probs = np.asarray(probs, dtype=float)
    if not 0 <= true_label < len(probs):
        raise IndexError(f"label {true_label} out of range for {len(probs)} classes")
    grad = probs.copy()
    grad[true_label] -= 1.0
    return grad


def batch_cross_entropy(probs: np.ndarray, labels: np.ndarray) -> tuple[float, np.ndarray]:
    """Mean loss over a batch and the mean logit gradient (probs - onehot)/n."""
    n = probs.shape[0]
    clamped = np.maximum(probs[np.arange(n), labels], LOG_CLAMP)
    loss = float(-np.mean(np.log(clamped)))
    grad = probs.copy()
    grad[np.arange(n), labels] -= 1.0
    return loss, grad / n
