'''Domain Separation Network with a softmax head over source items.

    h_c = E_c(x)                shared encoder
    h_p = E_p^S(x) | E_p^T(x)   private encoder of the batch's domain
    x̂   = D(h_c + h_p)
    u   = G(h_c),  logits = u·Vᵀ
    d̂   = sigmoid(Z(GRL(h_c)))
'''
from __future__ import annotations
from typing import TYPE_CHECKING
if TYPE_CHECKING:
    from crossrec.models.sdae import SdaeModel

from dataclasses import dataclass, field, asdict

import numpy as np

from crossrec.enums import Domain, Activation
from crossrec.errors import MixedDomainBatchError, ShapeMismatchError, LabelOutOfRangeError
from crossrec.models.model_base import BaseNetwork
from crossrec.models.model_config import DsnConfig, LossWeights
from crossrec.models.sdae import reconstruction_loss
from crossrec.nn import Rng, Mlp, MlpCache, Param
from crossrec.nn.functional import (
    he_init,
    sigmoid,
    softmax_ce_batch,
    grl_forward,
    grl_backward,
    binary_cross_entropy,
    binary_cross_entropy_logit_grad,
)


class DsnModel(BaseNetwork):
    def __init__(self, input_dim: int, num_labels: int, config: DsnConfig | None = None, rng: Rng | None = None, dtype=np.float64):
        assert input_dim >= 1 and num_labels >= 1, f'{input_dim=} and {num_labels=} must be >= 1'
        self.config = config = config or DsnConfig()
        self.input_dim = input_dim
        self.num_labels = num_labels
        rng = rng or Rng(0)
        encoder_dims = [input_dim, *config.encoder_hidden, config.code_dim]
        self.shared_encoder = Mlp('E_c', encoder_dims, rng.child(0), dropout=config.encoder_dropout, dtype=dtype)
        self.private_encoders: dict[Domain, Mlp] = {
            Domain.SOURCE: Mlp('E_p_source', encoder_dims, rng.child(1), dropout=config.encoder_dropout, dtype=dtype),
            Domain.TARGET: Mlp('E_p_target', encoder_dims, rng.child(2), dropout=config.encoder_dropout, dtype=dtype),
        }
        self.decoder = Mlp('D', [config.code_dim, *config.decoder_hidden, input_dim], rng.child(3), dropout=config.decoder_dropout, dtype=dtype)
        self.classifier = Mlp('G', [config.code_dim, *config.classifier_hidden, config.code_dim], rng.child(4), dropout=config.classifier_dropout, dtype=dtype)
        self.discriminator = Mlp(
            'Z', [config.code_dim, *config.discriminator_hidden, 1], rng.child(5),
            dropout=config.discriminator_dropout, final_activation=Activation.IDENTITY, dtype=dtype,
        )
        self.softmax_weights = Param('V', he_init(config.code_dim, (num_labels, config.code_dim), rng.child(6), dtype=dtype))

    @property
    def code_dim(self) -> int:
        return self.config.code_dim

    @property
    def subnetworks(self) -> dict[str, Mlp]:
        return {
            'shared_encoder': self.shared_encoder,
            'private_encoder_source': self.private_encoders[Domain.SOURCE],
            'private_encoder_target': self.private_encoders[Domain.TARGET],
            'decoder': self.decoder,
            'classifier': self.classifier,
            'discriminator': self.discriminator,
        }

    @property
    def params(self) -> list[Param]:
        return [p for mlp in self.subnetworks.values() for p in mlp.params] + [self.softmax_weights]

    def to_meta(self) -> dict:
        return {'input_dim': self.input_dim, 'num_labels': self.num_labels, 'dsn': self.config.model_dump()}

    @classmethod
    def from_meta(cls, meta: dict) -> DsnModel:
        return cls(meta['input_dim'], meta['num_labels'], DsnConfig(**meta['dsn']))

    def user_embedding(self, x: np.ndarray) -> np.ndarray:
        '''u = G(E_c(x)) at inference'''
        return self.classifier(self.shared_encoder(np.atleast_2d(x)))

    def scores(self, x: np.ndarray) -> np.ndarray:
        '''Logits over all source items (n x L) at inference'''
        return self.user_embedding(x) @ self.softmax_weights.value.T


@dataclass
class Batch:
    inputs: np.ndarray
    domain_labels: np.ndarray
    labels: np.ndarray | None = None
    # precomputed anchor codes of the label items, treated as constants
    item_codes: np.ndarray | None = None
    # dense feature vectors of the label items, fed to the SDAE
    item_inputs: np.ndarray | None = None

    def __post_init__(self):
        self.domain_labels = np.asarray(self.domain_labels, dtype=np.float64)
        n = self.inputs.shape[0]
        if self.domain_labels.shape != (n,):
            raise ShapeMismatchError(f'domain_labels must have shape ({n},), got {self.domain_labels.shape}')
        if self.labels is not None:
            self.labels = np.asarray(self.labels, dtype=np.int64)
            if self.labels.shape != (n,):
                raise ShapeMismatchError(f'labels must have shape ({n},), got {self.labels.shape}')
            if np.any(self.domain_labels != Domain.SOURCE.label):
                raise MixedDomainBatchError('labels are only allowed on source batches')
        for name in ('item_codes', 'item_inputs'):
            value = getattr(self, name)
            if value is not None and value.shape[0] != n:
                raise ShapeMismatchError(f'{name} must have {n} rows, got {value.shape[0]}')

    @classmethod
    def of(cls, inputs: np.ndarray, domain: Domain, **kwargs) -> Batch:
        return cls(inputs, np.full(inputs.shape[0], Domain(domain).label, dtype=np.float64), **kwargs)

    def __len__(self):
        return self.inputs.shape[0]

    @property
    def domain(self) -> Domain:
        if not len(self):
            raise ShapeMismatchError('empty batch has no domain')
        if np.all(self.domain_labels == Domain.SOURCE.label):
            return Domain.SOURCE
        elif np.all(self.domain_labels == Domain.TARGET.label):
            return Domain.TARGET
        raise MixedDomainBatchError('batch mixes source and target examples')


@dataclass
class DsnActivations:
    domain: Domain
    h_c: np.ndarray
    h_p: np.ndarray
    x_hat: np.ndarray
    u: np.ndarray
    # logit of the discriminator before the sigmoid, (n x 1)
    z: np.ndarray
    d_hat: np.ndarray
    logits: np.ndarray | None = None
    # sorted label subset the logits are computed over, None = all labels
    candidates: np.ndarray | None = None
    caches: dict[str, MlpCache] = field(default_factory=dict, repr=False)


def dsn_forward(
    model: DsnModel,
    batch: Batch,
    domain: Domain | str,
    training: bool = False,
    rng: Rng | None = None,
    candidates: np.ndarray | None = None,
) -> DsnActivations:
    '''Runs every sub-network on a single-domain batch.

    Dropout masks are drawn in a fixed order (E_c, E_p, D, G, Z) so a given rng
    reproduces the same masks whatever the loss weights are.
    '''
    domain = Domain(domain)
    if batch.domain != domain:
        raise MixedDomainBatchError(f'expected a {domain} batch, got a {batch.domain} batch')
    if training and rng is None:
        raise ValueError('training mode needs an rng for dropout')
    rngs = [rng.child(i) if rng is not None else None for i in range(5)]
    h_c, cache_c = model.shared_encoder.forward(batch.inputs, training=training, rng=rngs[0])
    h_p, cache_p = model.private_encoders[domain].forward(batch.inputs, training=training, rng=rngs[1])
    x_hat, cache_d = model.decoder.forward(h_c + h_p, training=training, rng=rngs[2])
    u, cache_g = model.classifier.forward(h_c, training=training, rng=rngs[3])
    z, cache_z = model.discriminator.forward(grl_forward(h_c), training=training, rng=rngs[4])
    logits = None
    if domain == Domain.SOURCE:
        V = model.softmax_weights.value
        logits = u @ (V if candidates is None else V[candidates]).T
    return DsnActivations(
        domain=domain, h_c=h_c, h_p=h_p, x_hat=x_hat, u=u, z=z, d_hat=sigmoid(z), logits=logits,
        candidates=candidates,
        caches={'E_c': cache_c, 'E_p': cache_p, 'D': cache_d, 'G': cache_g, 'Z': cache_z},
    )


def difference_loss(H_c: np.ndarray, H_p: np.ndarray) -> float:
    '''||H_c · H_pᵀ||_F²'''
    if H_c.shape[0] != H_p.shape[0] or H_c.shape[1] != H_p.shape[1]:
        raise ShapeMismatchError(f'H_c {H_c.shape} and H_p {H_p.shape} must have the same shape')
    M = H_c @ H_p.T
    return float(np.sum(M * M))


def difference_loss_grad(H_c: np.ndarray, H_p: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    M = H_c @ H_p.T
    return 2.0 * M @ H_p, 2.0 * M.T @ H_c


def similarity_loss(d_hat: np.ndarray, d: np.ndarray) -> float:
    '''Binary cross-entropy of the domain discriminator, probabilities clamped at 1e-12.'''
    return binary_cross_entropy(np.ravel(d_hat), np.ravel(d))


def item_anchor_loss(V: np.ndarray, labels: np.ndarray, item_codes: np.ndarray) -> float:
    '''Σ_i ||v_{y_i} - h_i||²'''
    labels = np.asarray(labels, dtype=np.int64)
    if labels.size and (labels.min() < 0 or labels.max() >= V.shape[0]):
        raise LabelOutOfRangeError(f'labels must be in [0, {V.shape[0]})')
    if item_codes.shape != (labels.shape[0], V.shape[1]):
        raise ShapeMismatchError(f'item_codes must have shape ({labels.shape[0]}, {V.shape[1]}), got {item_codes.shape}')
    diff = V[labels] - item_codes
    return float(np.sum(diff * diff))


@dataclass(frozen=True)
class LossComponents:
    L_task: float
    L_recon: float
    L_difference: float
    L_similarity: float
    L_item: float
    L_IR: float
    E: float

    def to_dict(self) -> dict[str, float]:
        return asdict(self)


def _label_positions(labels: np.ndarray, candidates: np.ndarray | None) -> np.ndarray:
    if candidates is None:
        return labels
    positions = np.searchsorted(candidates, labels)
    positions = np.minimum(positions, len(candidates) - 1)
    if not np.array_equal(candidates[positions], labels):
        raise ValueError('every batch label must be one of the candidates')
    return positions


def _backward_domain(model: DsnModel, act: DsnActivations, g_x_hat: np.ndarray, g_u: np.ndarray | None, g_z: np.ndarray, g_h_c: np.ndarray, g_h_p: np.ndarray):
    g_sum = model.decoder.backward(act.caches['D'], g_x_hat)
    g_h_c = g_h_c + g_sum
    g_h_p = g_h_p + g_sum
    if g_u is not None:
        g_h_c = g_h_c + model.classifier.backward(act.caches['G'], g_u)
    g_h_c = g_h_c + grl_backward(model.discriminator.backward(act.caches['Z'], g_z))
    model.shared_encoder.backward(act.caches['E_c'], g_h_c)
    model.private_encoders[act.domain].backward(act.caches['E_p'], g_h_p)


def total_loss(
    model: DsnModel,
    sdae_model: SdaeModel | None,
    source_batch: Batch,
    target_batch: Batch,
    weights: LossWeights,
    rng: Rng | None = None,
    training: bool = True,
    candidates: np.ndarray | None = None,
    with_grad: bool = True,
) -> LossComponents:
    '''E = L_task + α·L_recon + β·L_difference + γ·L_similarity + λ_item·L_item + λ_IR·L_IR

    When `with_grad`, dE/dθ is accumulated into Param.grad of the DSN and of the SDAE.
    Random streams: rng.child(0) source forward, rng.child(1) target forward, rng.child(2) SDAE.
    Every forward runs whatever the weights are, so the draws do not depend on them.

    Args:
        candidates: sorted label subset for sampled softmax, must contain every source label.
    '''
    if source_batch.labels is None:
        raise ValueError('source batch must be labeled')
    if target_batch.labels is not None:
        raise ValueError('target batch must be unlabeled')
    rng = rng or Rng(0)
    src = dsn_forward(model, source_batch, Domain.SOURCE, training=training, rng=rng.child(0), candidates=candidates)
    tgt = dsn_forward(model, target_batch, Domain.TARGET, training=training, rng=rng.child(1))
    V = model.softmax_weights

    positions = _label_positions(source_batch.labels, candidates)
    L_task, g_logits = softmax_ce_batch(src.logits, positions)

    L_recon_s, g_xs = reconstruction_loss(source_batch.inputs, src.x_hat)
    L_recon_t, g_xt = reconstruction_loss(target_batch.inputs, tgt.x_hat)
    L_recon = L_recon_s + L_recon_t

    L_difference = difference_loss(src.h_c, src.h_p) + difference_loss(tgt.h_c, tgt.h_p)

    L_similarity = similarity_loss(src.d_hat, source_batch.domain_labels) + similarity_loss(tgt.d_hat, target_batch.domain_labels)

    L_item, L_IR = 0.0, 0.0
    codes, enc_cache = None, None
    if sdae_model is not None and source_batch.item_inputs is not None:
        codes, enc_cache = sdae_model.encoder.forward(source_batch.item_inputs, training=False)
        L_IR = sdae_model.denoising_loss(
            source_batch.item_inputs, rng.child(2), training=training,
            scale=weights.lambda_ir, with_grad=with_grad,
        )
    elif source_batch.item_codes is not None:
        codes = source_batch.item_codes
    if codes is not None:
        L_item = item_anchor_loss(V.value, source_batch.labels, codes)

    E = (
        L_task
        + weights.alpha * L_recon
        + weights.beta * L_difference
        + weights.gamma * L_similarity
        + weights.lambda_item * L_item
        + weights.lambda_ir * L_IR
    )

    if with_grad:
        # softmax head
        V_rows = V.value if candidates is None else V.value[candidates]
        g_u_src = g_logits @ V_rows
        g_V_rows = g_logits.T @ src.u
        if candidates is None:
            V.grad += g_V_rows
        else:
            V.grad[candidates] += g_V_rows
        if codes is not None and weights.lambda_item != 0.0:
            g_anchor = 2.0 * weights.lambda_item * (V.value[source_batch.labels] - codes)
            np.add.at(V.grad, source_batch.labels, g_anchor)
            if enc_cache is not None:
                sdae_model.encoder.backward(enc_cache, -g_anchor)

        for batch, act, g_x, g_u in ((source_batch, src, g_xs, g_u_src), (target_batch, tgt, g_xt, None)):
            g_h_c, g_h_p = difference_loss_grad(act.h_c, act.h_p)
            g_z = binary_cross_entropy_logit_grad(act.z, batch.domain_labels[:, None])
            _backward_domain(
                model, act,
                g_x_hat=weights.alpha * g_x,
                g_u=g_u,
                g_z=weights.gamma * g_z,
                g_h_c=weights.beta * g_h_c,
                g_h_p=weights.beta * g_h_p,
            )

    return LossComponents(
        L_task=L_task,
        L_recon=L_recon,
        L_difference=L_difference,
        L_similarity=L_similarity,
        L_item=L_item,
        L_IR=L_IR,
        E=float(E),
    )


def weight_decay_penalty(params: list[Param], weight_decay: float, with_grad: bool = True) -> float:
    '''weight_decay · Σ ||W||² over weight matrices (biases excluded)'''
    if weight_decay == 0.0:
        return 0.0
    penalty = 0.0
    for p in params:
        if not p.is_weight:
            continue
        penalty += float(np.sum(p.value * p.value))
        if with_grad:
            p.grad += 2.0 * weight_decay * p.value
    return weight_decay * penalty


def init_unseen_from_sdae(model: DsnModel, item_codes: np.ndarray, seen_labels: np.ndarray | list[int]) -> np.ndarray:
    '''Copies SDAE codes into the softmax rows of items never observed as labels.

    Returns:
        indices of the rows that were overwritten
    '''
    V = model.softmax_weights.value
    if item_codes.shape != V.shape:
        raise ShapeMismatchError(f'item_codes must have shape {V.shape}, got {item_codes.shape}')
    unseen = np.setdiff1d(np.arange(model.num_labels), np.asarray(seen_labels, dtype=np.int64))
    V[unseen] = item_codes[unseen]
    return unseen
