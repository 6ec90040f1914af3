import math

import numpy as np
import pytest

from crossrec.errors import InvalidRateError, LabelOutOfRangeError, ShapeMismatchError
from crossrec.nn import Rng
from crossrec.nn.functional import (
    elu,
    elu_grad,
    dropout_apply,
    grl_forward,
    grl_backward,
    softmax,
    softmax_ce,
    softmax_ce_batch,
    sigmoid,
    binary_cross_entropy,
    binary_cross_entropy_logit_grad,
)


def test_elu():
    assert elu(2.0) == 2.0
    assert elu(0.0) == 0.0
    assert elu(-1.0) == pytest.approx(math.exp(-1.0) - 1.0)
    np.testing.assert_array_equal(elu_grad(np.array([3.0, -2.0])), [1.0, math.exp(-2.0)])


@pytest.mark.smoke
def test_softmax_ce_gradient_is_probs_minus_onehot():
    logits = np.array([1.0, -0.5, 2.0, 0.0])
    loss, grad = softmax_ce(logits, 2)
    probs = softmax(logits)
    assert loss == pytest.approx(-math.log(probs[2]), abs=1e-12)
    expected = probs.copy()
    expected[2] -= 1.0
    np.testing.assert_allclose(grad, expected, atol=1e-12)


def test_softmax_ce_batch_sums_rows():
    logits = Rng(0).generator.normal(size=(5, 7))
    labels = np.array([0, 6, 3, 3, 1])
    loss, _ = softmax_ce_batch(logits, labels)
    expected = sum(softmax_ce(row, label)[0] for row, label in zip(logits, labels))
    assert loss == pytest.approx(expected, abs=1e-12)


def test_softmax_ce_rejects_bad_labels():
    with pytest.raises(LabelOutOfRangeError):
        softmax_ce_batch(np.zeros((2, 3)), np.array([0, 3]))
    with pytest.raises(ShapeMismatchError):
        softmax_ce_batch(np.zeros((2, 3)), np.array([0]))


def test_softmax_is_shift_invariant_and_stable():
    logits = np.array([[1000.0, 1001.0, 999.0]])
    np.testing.assert_allclose(softmax(logits), softmax(logits - 1000.0))
    assert np.all(np.isfinite(softmax(logits)))


@pytest.mark.smoke
def test_bce_at_one_half_is_ln2():
    assert binary_cross_entropy(np.array([0.5]), np.array([1.0])) == pytest.approx(math.log(2.0), abs=1e-12)
    assert binary_cross_entropy(np.array([0.5]), np.array([0.0])) == pytest.approx(math.log(2.0), abs=1e-12)


def test_bce_clamps_certain_mistakes():
    loss = binary_cross_entropy(np.array([0.0, 1.0]), np.array([1.0, 0.0]))
    assert np.isfinite(loss)
    assert loss == pytest.approx(-2.0 * math.log(1e-12), rel=1e-3)


def test_bce_logit_grad():
    z = np.array([[-1.0], [0.0], [2.0]])
    d = np.array([[0.0], [1.0], [1.0]])
    np.testing.assert_allclose(binary_cross_entropy_logit_grad(z, d), sigmoid(z) - d)


def test_sigmoid_does_not_overflow():
    out = sigmoid(np.array([-1000.0, 0.0, 1000.0]))
    np.testing.assert_array_equal(out, [0.0, 0.5, 1.0])


def test_grl_is_identity_forward_and_negation_backward():
    x = np.array([[1.5, -2.0]])
    assert grl_forward(x) is x
    np.testing.assert_array_equal(grl_backward(x), -x)


def test_dropout_is_identity_at_inference():
    x = np.ones((3, 4))
    out, mask = dropout_apply(x, 0.5, training=False, rng=None)
    np.testing.assert_array_equal(out, x)
    np.testing.assert_array_equal(mask, np.ones_like(x))


def test_dropout_scales_survivors():
    x = np.ones((50, 50))
    out, mask = dropout_apply(x, 0.75, training=True, rng=Rng(1))
    assert set(np.unique(out)) <= {0.0, 4.0}
    np.testing.assert_array_equal(out, mask)
    # same stream, same mask
    out_again, _ = dropout_apply(x, 0.75, training=True, rng=Rng(1))
    np.testing.assert_array_equal(out, out_again)


@pytest.mark.parametrize('rate', [-0.1, 1.0, 1.5])
def test_dropout_rejects_invalid_rates(rate):
    with pytest.raises(InvalidRateError):
        dropout_apply(np.ones((2, 2)), rate, training=True, rng=Rng(0))


def test_dropout_is_unbiased():
    x = np.array([0.5, 1.0, -2.0, 3.0])
    out, _ = dropout_apply(np.tile(x, (100_000, 1)), 0.5, training=True, rng=Rng(3))
    np.testing.assert_allclose(out.mean(axis=0), x, rtol=0.02)
