'''Finite-difference checks of every hand-written backward pass, run by `crossrec gradcheck`.

All graphs are tiny, double precision, and re-seed their dropout/corruption streams on
every evaluation so the masks are frozen across the central differences.
'''
from __future__ import annotations

import logging

import numpy as np

from crossrec.enums import Activation, Domain
from crossrec.models.dsn import DsnModel, Batch, dsn_forward, total_loss
from crossrec.models.model_config import DsnConfig, SdaeConfig, LossWeights
from crossrec.models.sdae import SdaeModel
from crossrec.nn import Rng, Mlp, FunctionGraph, GradCheckResult, grad_check
from crossrec.nn.functional import softmax_ce_batch, grl_backward, binary_cross_entropy_logit_grad


logger = logging.getLogger('crossrec')

TOLERANCE = 1e-4
EPS = 1e-5
# gradients below this magnitude are compared in absolute terms
REL_ERROR_FLOOR = 1e-4

TOY_INPUT_DIM = 20
TOY_NUM_LABELS = 7
TOY_BATCH_SIZE = 4
TOY_ITEM_DIM = 9
TOY_DSN_CONFIG = DsnConfig(
    code_dim=6,
    encoder_hidden=[10, 8],
    decoder_hidden=[8, 10],
    classifier_hidden=[8],
    discriminator_hidden=[10],
)
TOY_SDAE_CONFIG = SdaeConfig(hidden_dims=[8], code_dim=6, input_corruption=0.3, hidden_dropout=0.5)
TOY_LOSS_WEIGHTS = LossWeights(alpha=0.5, beta=0.1, gamma=1.0, lambda_item=0.5, lambda_ir=0.5)


def check_softmax_mlp(seed: int = 0, floor: float = REL_ERROR_FLOOR) -> GradCheckResult:
    rng = Rng(seed)
    mlp = Mlp('ce', [6, 8, 8, 5], rng.child(0), dropout=0.5, final_activation=Activation.IDENTITY)
    x = rng.child(1).generator.normal(size=(4, 6))
    labels = np.array([0, 2, 4, 2])

    def _loss(with_grad: bool) -> float:
        logits, cache = mlp.forward(x, training=True, rng=Rng(seed, 2))
        loss, grad = softmax_ce_batch(logits, labels)
        if with_grad:
            mlp.backward(cache, grad)
        return loss

    max_error, worst, num_checked = grad_check(FunctionGraph(mlp.params, _loss), eps=EPS, floor=floor)
    return GradCheckResult('softmax cross-entropy MLP', max_error, worst, num_checked, TOLERANCE)


def check_sdae(seed: int = 0, floor: float = REL_ERROR_FLOOR) -> GradCheckResult:
    rng = Rng(seed)
    sdae = SdaeModel(TOY_ITEM_DIM, TOY_SDAE_CONFIG, rng=rng.child(0))
    x = rng.child(1).generator.random((4, TOY_ITEM_DIM))

    def _loss(with_grad: bool) -> float:
        return sdae.denoising_loss(x, Rng(seed, 2), training=True, with_grad=with_grad)

    max_error, worst, num_checked = grad_check(FunctionGraph(sdae.params, _loss), eps=EPS, floor=floor)
    return GradCheckResult('SDAE corrupt-encode-decode', max_error, worst, num_checked, TOLERANCE)


def toy_dsn(seed: int = 0) -> tuple[DsnModel, SdaeModel, Batch, Batch]:
    '''input_dim=20, L=7, n=4 instance with every loss term active'''
    rng = Rng(seed)
    model = DsnModel(TOY_INPUT_DIM, TOY_NUM_LABELS, TOY_DSN_CONFIG, rng=rng.child(0))
    sdae = SdaeModel(TOY_ITEM_DIM, TOY_SDAE_CONFIG, rng=rng.child(1))
    g = rng.child(2).generator
    source = Batch.of(
        g.random((TOY_BATCH_SIZE, TOY_INPUT_DIM)),
        Domain.SOURCE,
        labels=np.array([0, 3, 3, 6]),
        item_inputs=g.random((TOY_BATCH_SIZE, TOY_ITEM_DIM)),
    )
    target = Batch.of(g.random((TOY_BATCH_SIZE, TOY_INPUT_DIM)), Domain.TARGET)
    return model, sdae, source, target


def check_dsn_objective(seed: int = 0, candidates: np.ndarray | None = None, floor: float = REL_ERROR_FLOOR) -> GradCheckResult:
    model, sdae, source, target = toy_dsn(seed)

    def _loss(with_grad: bool) -> float:
        components = total_loss(
            model, sdae, source, target, TOY_LOSS_WEIGHTS,
            rng=Rng(seed, 3), training=True, candidates=candidates, with_grad=with_grad,
        )
        return components.E

    max_error, worst, num_checked = grad_check(FunctionGraph(model.params + sdae.params, _loss), eps=EPS, floor=floor)
    name = 'DSN objective (six terms)' if candidates is None else 'DSN objective (six terms, sampled softmax)'
    return GradCheckResult(name, max_error, worst, num_checked, TOLERANCE)


def check_grl_sign(seed: int = 0) -> GradCheckResult:
    '''Shared-encoder gradients of the discriminator loss through GRL are the exact negation
    of the same backward pass with GRL replaced by the identity.'''
    model, _, _, target = toy_dsn(seed)
    act = dsn_forward(model, target, Domain.TARGET, training=False)
    g_z = binary_cross_entropy_logit_grad(act.z, target.domain_labels[:, None])
    encoder = model.shared_encoder

    def _encoder_grads(reverse: bool) -> list[np.ndarray]:
        model.zero_grad()
        g_in = model.discriminator.backward(act.caches['Z'], g_z)
        encoder.backward(act.caches['E_c'], grl_backward(g_in) if reverse else g_in)
        return [p.grad.copy() for p in encoder.params]

    reversed_grads = _encoder_grads(reverse=True)
    plain_grads = _encoder_grads(reverse=False)
    model.zero_grad()
    exact = all(np.array_equal(r, -p) for r, p in zip(reversed_grads, plain_grads))
    num_checked = sum(g.size for g in reversed_grads)
    return GradCheckResult('gradient reversal sign flip', 0.0 if exact else float('inf'), '' if exact else encoder.name, num_checked, TOLERANCE)


def run_verification_suite(seed: int = 0, floor: float = REL_ERROR_FLOOR) -> list[GradCheckResult]:
    results = [
        check_softmax_mlp(seed, floor=floor),
        check_sdae(seed, floor=floor),
        check_dsn_objective(seed, floor=floor),
        check_dsn_objective(seed, candidates=np.array([0, 2, 3, 6]), floor=floor),
        check_grl_sign(seed),
    ]
    for result in results:
        level = logging.INFO if result.passed else logging.ERROR
        logger.log(level, f'{result.name}: max rel error {result.max_rel_error:.3e} over {result.num_checked} entries (worst {result.worst_param or "-"})')
    return results
