'''Stateless kernels of the dense network substrate.

All functions work on float64 numpy arrays unless the caller passes float32.
'''
from __future__ import annotations
from typing import TYPE_CHECKING
if TYPE_CHECKING:
    from crossrec.nn.rng import Rng

import numpy as np

from crossrec.errors import InvalidRateError, LabelOutOfRangeError, ShapeMismatchError


# lower clamp for probabilities inside logs
PROB_CLAMP = 1e-12


def elu(x: np.ndarray | float) -> np.ndarray | float:
    x = np.asarray(x, dtype=float) if np.isscalar(x) else x
    out = np.where(x > 0, x, np.expm1(np.minimum(x, 0.0)))
    return float(out) if out.ndim == 0 else out


def elu_grad(x: np.ndarray) -> np.ndarray:
    return np.where(x > 0, 1.0, np.exp(np.minimum(x, 0.0)))


def check_rate(rate: float):
    if not (0.0 <= rate < 1.0):
        raise InvalidRateError(f'rate must be in [0, 1), got {rate}')


def dropout_apply(x: np.ndarray, rate: float, training: bool, rng: Rng | None) -> tuple[np.ndarray, np.ndarray]:
    '''Inverted dropout, survivors are scaled by 1/(1-rate) so inference is the identity.
    Returns (output, mask) where mask already carries the scaling.
    '''
    check_rate(rate)
    if not training or rate == 0.0:
        return x, np.ones_like(x)
    keep = rng.generator.random(x.shape) >= rate
    mask = keep.astype(x.dtype) / (1.0 - rate)
    return x * mask, mask


def grl_forward(x: np.ndarray) -> np.ndarray:
    return x


def grl_backward(upstream_grad: np.ndarray) -> np.ndarray:
    '''Gradient reversal: identity forward, negated gradient backward.'''
    return -upstream_grad


def he_init(fan_in: int, shape: tuple[int, ...], rng: Rng, dtype=np.float64) -> np.ndarray:
    '''Gaussian weights with mean 0 and variance 2/fan_in.'''
    assert fan_in >= 1, f'{fan_in=} must be >= 1'
    return rng.generator.normal(0.0, np.sqrt(2.0 / fan_in), size=shape).astype(dtype, copy=False)


def softmax(logits: np.ndarray) -> np.ndarray:
    shifted = logits - logits.max(axis=-1, keepdims=True)
    exp = np.exp(shifted)
    return exp / exp.sum(axis=-1, keepdims=True)


def log_softmax(logits: np.ndarray) -> np.ndarray:
    shifted = logits - logits.max(axis=-1, keepdims=True)
    return shifted - np.log(np.exp(shifted).sum(axis=-1, keepdims=True))


def _check_labels(labels: np.ndarray, num_classes: int):
    if labels.size and (labels.min() < 0 or labels.max() >= num_classes):
        raise LabelOutOfRangeError(f'labels must be in [0, {num_classes}), got range [{labels.min()}, {labels.max()}]')


def softmax_ce(logits: np.ndarray, label: int) -> tuple[float, np.ndarray]:
    '''Cross-entropy of a single logit vector against an integer label.
    Returns (loss, dloss/dlogits) with grad = softmax(logits) - onehot(label).
    '''
    if logits.ndim != 1:
        raise ShapeMismatchError(f'expected a logit vector, got shape {logits.shape}')
    loss, grad = softmax_ce_batch(logits[None, :], np.array([label]))
    return loss, grad[0]


def softmax_ce_batch(logits: np.ndarray, labels: np.ndarray) -> tuple[float, np.ndarray]:
    '''Summed cross-entropy over rows of `logits` (n x L).'''
    labels = np.asarray(labels, dtype=np.int64)
    if logits.ndim != 2 or logits.shape[0] != labels.shape[0]:
        raise ShapeMismatchError(f'logits {logits.shape} do not match labels {labels.shape}')
    _check_labels(labels, logits.shape[1])
    log_probs = log_softmax(logits)
    rows = np.arange(labels.shape[0])
    loss = -float(log_probs[rows, labels].sum())
    grad = np.exp(log_probs)
    grad[rows, labels] -= 1.0
    return loss, grad


def sigmoid(z: np.ndarray) -> np.ndarray:
    # split by sign to avoid overflow in exp
    out = np.empty_like(z, dtype=float)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    exp_z = np.exp(z[~pos])
    out[~pos] = exp_z / (1.0 + exp_z)
    return out


def binary_cross_entropy(d_hat: np.ndarray, d: np.ndarray) -> float:
    '''-sum(d log d_hat + (1-d) log(1-d_hat)) with probabilities clamped to [1e-12, 1-1e-12].'''
    d_hat = np.clip(np.asarray(d_hat, dtype=float), PROB_CLAMP, 1.0 - PROB_CLAMP)
    d = np.asarray(d, dtype=float)
    if d_hat.shape != d.shape:
        raise ShapeMismatchError(f'd_hat {d_hat.shape} does not match d {d.shape}')
    return -float(np.sum(d * np.log(d_hat) + (1.0 - d) * np.log(1.0 - d_hat)))


def binary_cross_entropy_logit_grad(z: np.ndarray, d: np.ndarray) -> np.ndarray:
    '''d BCE(sigmoid(z), d) / dz, zero where the clamp is active.'''
    d_hat = sigmoid(z)
    grad = d_hat - d
    clamped = (d_hat < PROB_CLAMP) | (d_hat > 1.0 - PROB_CLAMP)
    grad[clamped] = 0.0
    return grad
