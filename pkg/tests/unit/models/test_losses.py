import math

import numpy as np
import pytest

from crossrec.errors import LabelOutOfRangeError, ShapeMismatchError
from crossrec.models.dsn import difference_loss, difference_loss_grad, similarity_loss, item_anchor_loss
from crossrec.nn import Rng


@pytest.mark.smoke
def test_difference_loss_matches_double_loop():
    g = Rng(0).generator
    H_c, H_p = g.normal(size=(3, 64)), g.normal(size=(3, 64))
    brute = 0.0
    for i in range(3):
        for j in range(3):
            brute += float(np.dot(H_c[i], H_p[j])) ** 2
    assert difference_loss(H_c, H_p) == pytest.approx(brute, abs=1e-10)


def test_difference_loss_is_zero_on_orthogonal_subspaces():
    H_c = np.zeros((4, 6))
    H_p = np.zeros((4, 6))
    H_c[:, :3] = Rng(1).generator.normal(size=(4, 3))
    H_p[:, 3:] = Rng(2).generator.normal(size=(4, 3))
    assert difference_loss(H_c, H_p) == 0.0


def test_difference_loss_grad_matches_finite_differences():
    g = Rng(3).generator
    H_c, H_p = g.normal(size=(2, 3)), g.normal(size=(2, 3))
    g_c, _ = difference_loss_grad(H_c, H_p)
    eps = 1e-6
    bumped = H_c.copy()
    bumped[1, 2] += eps
    lowered = H_c.copy()
    lowered[1, 2] -= eps
    numeric = (difference_loss(bumped, H_p) - difference_loss(lowered, H_p)) / (2 * eps)
    assert g_c[1, 2] == pytest.approx(numeric, rel=1e-6)


def test_difference_loss_shape_mismatch():
    with pytest.raises(ShapeMismatchError):
        difference_loss(np.zeros((2, 3)), np.zeros((2, 4)))


@pytest.mark.smoke
def test_similarity_loss_at_chance():
    d_hat = np.full((4, 1), 0.5)
    d = np.array([0.0, 0.0, 1.0, 1.0])
    assert similarity_loss(d_hat, d) == pytest.approx(4 * math.log(2.0), abs=1e-12)


def test_item_anchor_loss():
    V = np.array([[1.0, 0.0], [0.0, 1.0], [2.0, 2.0]])
    codes = np.array([[1.0, 0.0], [0.0, 0.0]])
    # row 0 matches exactly, row 2 is 2√2 away
    assert item_anchor_loss(V, np.array([0, 2]), codes) == pytest.approx(8.0)


def test_item_anchor_loss_errors():
    V = np.zeros((3, 2))
    with pytest.raises(LabelOutOfRangeError):
        item_anchor_loss(V, np.array([3]), np.zeros((1, 2)))
    with pytest.raises(ShapeMismatchError):
        item_anchor_loss(V, np.array([0]), np.zeros((1, 3)))
