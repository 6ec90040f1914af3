'''Stacked denoising autoencoder for item codes.

Encoder item_dim -> 256 -> 64, decoder 64 -> 256 -> item_dim (with the default SdaeConfig).
Training minimizes Σ_i ||x_i - D(E(corrupt(x_i)))||².
'''
from __future__ import annotations
from typing import TYPE_CHECKING
if TYPE_CHECKING:
    from scipy import sparse

import logging
from dataclasses import dataclass

import numpy as np

from crossrec.errors import EmptyDataError, ShapeMismatchError
from crossrec.models.model_base import BaseNetwork
from crossrec.models.model_config import SdaeConfig
from crossrec.nn import Rng, Mlp, MlpCache, Adam
from crossrec.nn.functional import check_rate


logger = logging.getLogger('crossrec.train')


def corrupt(x: np.ndarray, rate: float, rng: Rng) -> np.ndarray:
    '''Mask-out noise: each entry is zeroed with probability `rate`, survivors keep their value.'''
    check_rate(rate)
    x = np.asarray(x)
    if rate == 0.0:
        return x.copy()
    keep = rng.generator.random(x.shape) >= rate
    return x * keep


def reconstruction_loss(x: np.ndarray, x_hat: np.ndarray) -> tuple[float, np.ndarray]:
    '''Σ ||x - x_hat||² and its gradient w.r.t. x_hat'''
    if x.shape != x_hat.shape:
        raise ShapeMismatchError(f'x {x.shape} does not match reconstruction {x_hat.shape}')
    diff = x_hat - x
    return float(np.sum(diff * diff)), 2.0 * diff


@dataclass
class SdaeCache:
    corrupted: np.ndarray
    encoder: MlpCache
    decoder: MlpCache


class SdaeModel(BaseNetwork):
    def __init__(self, item_dim: int, config: SdaeConfig | None = None, rng: Rng | None = None, dtype=np.float64):
        self.config = config or SdaeConfig()
        self.item_dim = item_dim
        rng = rng or Rng(self.config.seed)
        hidden = list(self.config.hidden_dims)
        self.encoder = Mlp('sdae.encoder', [item_dim, *hidden, self.config.code_dim], rng.child(0), dropout=self.config.hidden_dropout, dtype=dtype)
        self.decoder = Mlp('sdae.decoder', [self.config.code_dim, *reversed(hidden), item_dim], rng.child(1), dropout=self.config.hidden_dropout, dtype=dtype)

    @property
    def code_dim(self) -> int:
        return self.encoder.output_dim

    @property
    def params(self):
        return self.encoder.params + self.decoder.params

    def to_meta(self) -> dict:
        return {'item_dim': self.item_dim, 'sdae': self.config.model_dump()}

    @classmethod
    def from_meta(cls, meta: dict) -> SdaeModel:
        return cls(meta['item_dim'], SdaeConfig(**meta['sdae']))

    def forward(self, x_corrupted: np.ndarray, training: bool, rng: Rng | None = None) -> tuple[np.ndarray, np.ndarray, SdaeCache]:
        if x_corrupted.ndim != 2 or x_corrupted.shape[1] != self.item_dim:
            raise ShapeMismatchError(f'expected (n, {self.item_dim}) item vectors, got {x_corrupted.shape}')
        code, enc_cache = self.encoder.forward(x_corrupted, training=training, rng=rng)
        recon, dec_cache = self.decoder.forward(code, training=training, rng=rng)
        return code, recon, SdaeCache(x_corrupted, enc_cache, dec_cache)

    def backward(self, cache: SdaeCache, grad_recon: np.ndarray, grad_code: np.ndarray | None = None):
        g_code = self.decoder.backward(cache.decoder, grad_recon)
        if grad_code is not None:
            g_code = g_code + grad_code
        self.encoder.backward(cache.encoder, g_code)

    def encode(self, x: np.ndarray) -> np.ndarray:
        '''Inference-mode code of clean item vectors'''
        x = np.atleast_2d(x)
        code, _ = self.encoder.forward(x, training=False)
        return code

    def denoising_loss(self, x: np.ndarray, rng: Rng, training: bool = True, scale: float = 1.0, with_grad: bool = True) -> float:
        '''Corrupts `x`, reconstructs it and, when `with_grad`, accumulates scale·dL/dθ.
        Corruption draws from rng.child(0), hidden dropout from rng.child(1).
        '''
        x_tilde = corrupt(x, self.config.input_corruption if training else 0.0, rng.child(0))
        _, recon, cache = self.forward(x_tilde, training=training, rng=rng.child(1))
        loss, grad = reconstruction_loss(x, recon)
        if with_grad and scale != 0.0:
            self.backward(cache, scale * grad)
        return loss


def sdae_apply(model: SdaeModel, x_corrupted: np.ndarray, training: bool = False, rng: Rng | None = None) -> tuple[np.ndarray, np.ndarray]:
    '''Returns (code, reconstruction); a single vector in gives single vectors out.'''
    is_vector = np.ndim(x_corrupted) == 1
    code, recon, _ = model.forward(np.atleast_2d(x_corrupted), training=training, rng=rng)
    if is_vector:
        return code[0], recon[0]
    return code, recon


def _dense_rows(items: np.ndarray | sparse.spmatrix, rows: np.ndarray) -> np.ndarray:
    batch = items[rows]
    return batch.toarray() if hasattr(batch, 'toarray') else np.asarray(batch, dtype=np.float64)


def train_sdae(
    items: np.ndarray | sparse.spmatrix,
    config: SdaeConfig | None = None,
    model: SdaeModel | None = None,
    epochs: int | None = None,
) -> tuple[SdaeModel, list[float]]:
    '''Trains with Adam on mini-batches of densified item vectors.

    Returns:
        (model, per-epoch mean reconstruction loss per item)
    '''
    config = config or (model.config if model is not None else SdaeConfig())
    num_items = items.shape[0]
    if num_items == 0:
        raise EmptyDataError('train_sdae needs at least one item')
    rng = Rng(config.seed)
    model = model or SdaeModel(items.shape[1], config, rng=rng.child(0))
    optimizer = Adam(model.params, lr=config.lr)
    trace = []
    for epoch in range(epochs or config.epochs):
        epoch_rng = rng.child(1, epoch)
        order = epoch_rng.child(0).generator.permutation(num_items)
        total = 0.0
        for step, start in enumerate(range(0, num_items, config.batch_size)):
            x = _dense_rows(items, order[start:start + config.batch_size])
            optimizer.zero_grad()
            total += model.denoising_loss(x, epoch_rng.child(1, step), training=True)
            optimizer.step()
        trace.append(total / num_items)
        logger.info(f'sdae epoch {epoch + 1}: reconstruction loss {trace[-1]:.6f}')
    return model, trace
