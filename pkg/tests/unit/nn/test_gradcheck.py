import numpy as np
import pytest

from crossrec.errors import NonDeterministicGraphError
from crossrec.nn import Rng, Mlp, Param, FunctionGraph, grad_check
from crossrec.verification import (
    TOLERANCE,
    check_softmax_mlp,
    check_sdae,
    check_dsn_objective,
    check_grl_sign,
    run_verification_suite,
)


@pytest.mark.smoke
def test_softmax_mlp_gradients():
    result = check_softmax_mlp()
    assert result.passed, result
    assert result.num_checked > 0


@pytest.mark.smoke
def test_sdae_gradients():
    assert check_sdae().passed


@pytest.mark.smoke
def test_full_objective_gradients():
    result = check_dsn_objective()
    assert result.max_rel_error < TOLERANCE, result


def test_full_objective_gradients_with_sampled_softmax():
    # candidates hold every toy label (0, 3, 6) plus one negative
    result = check_dsn_objective(candidates=np.array([0, 2, 3, 6]))
    assert result.passed, result


def test_gradient_reversal_is_an_exact_sign_flip():
    result = check_grl_sign()
    assert result.max_rel_error == 0.0
    assert result.passed


def test_suite_reports_every_graph():
    results = run_verification_suite(seed=1)
    assert len(results) == 5
    assert all(result.passed for result in results), [r for r in results if not r.passed]


def test_fresh_randomness_is_rejected():
    mlp = Mlp('m', [3, 4, 1], Rng(0), dropout=0.5)
    x = np.ones((2, 3))
    rng = Rng(1)

    def _loss(with_grad: bool) -> float:
        out, cache = mlp.forward(x, training=True, rng=rng)
        if with_grad:
            mlp.backward(cache, np.ones_like(out))
        return float(out.sum())

    with pytest.raises(NonDeterministicGraphError):
        grad_check(FunctionGraph(mlp.params, _loss))


def test_eps_out_of_range():
    mlp = Mlp('m', [2, 1], Rng(0))
    with pytest.raises(ValueError):
        grad_check(FunctionGraph(mlp.params, lambda with_grad: 0.0), eps=0.1)


def test_floor_decides_how_small_gradients_are_judged():
    p = Param('w', np.array([0.3]))

    def _loss(with_grad: bool) -> float:
        # the analytic gradient leaves out the 1e-6 slope
        return float(1e-6 * p.value[0])

    graph = FunctionGraph([p], _loss)
    loose, _, _ = grad_check(graph, eps=1e-5)
    tight, _, _ = grad_check(graph, eps=1e-5, floor=1e-9)
    assert loose == pytest.approx(1e-2, rel=1e-3)
    assert tight == pytest.approx(1.0, rel=1e-3)
    with pytest.raises(ValueError):
        grad_check(graph, floor=0.0)
