"""
Test the graph regularization and the total objective.
"""

import numpy as np
import pytest

from relmem.objective import (  # type: ignore
    LossWeights,
    edge_bce,
    graph_regularization,
    total_loss,
)
from relmem.tensors import Tensor, grad_check  # type: ignore


def _bce(p, q):
    return -(p * np.log(q) + (1 - p) * np.log(1 - q))


def test_loss_weights_defaults_and_validation():
    weights = LossWeights()
    assert (weights.lambda_c, weights.lambda_t, weights.lambda_g) == (1.0, 1.0, 50.0)
    with pytest.raises(ValueError):
        LossWeights(lambda_g=-1.0)


def test_edge_bce_value():
    old = np.array([0.2, 0.9])
    new = np.array([0.5, 0.6])
    expected = np.mean(_bce(old, new))
    assert edge_bce(old, Tensor(new)).item() == pytest.approx(expected)
    with pytest.raises(ValueError):
        edge_bce(np.array([0.5]), Tensor(new))


def test_edge_bce_is_minimal_at_stored_values():
    old = np.array([0.3, 0.7, 0.5])
    at_old = edge_bce(old, Tensor(old)).item()
    for shift in (-0.1, 0.1):
        assert edge_bce(old, Tensor(old + shift)).item() > at_old


def test_edge_bce_clamps_saturated_edges():
    value = edge_bce(np.array([0.0, 1.0]), Tensor([1.0, 0.0])).item()
    assert np.isfinite(value)
    assert value > 10.0


def test_graph_regularization_averages_rows_of_valid_edges():
    stored = np.array([[0.0, 0.8, 0.4], [0.8, 0.0, 0.6], [0.4, 0.6, 0.0]])
    new = np.array([[0.0, 0.5, 0.5], [0.5, 0.0, 0.5], [0.5, 0.5, 0.0]])
    rows = np.array([0, 1])
    valid = np.array([[False, True, True], [True, False, False]])
    row0 = (_bce(0.8, 0.5) + _bce(0.4, 0.5)) / 2
    row1 = _bce(0.8, 0.5)
    value = graph_regularization(stored, Tensor(new), rows, valid).item()
    assert value == pytest.approx((row0 + row1) / 2)


def test_graph_regularization_skips_rows_without_edges():
    stored = np.full((3, 3), 0.5)
    new = Tensor(np.full((3, 3), 0.25))
    rows = np.array([0, 2])
    valid = np.array([[False, True, False], [False, False, False]])
    value = graph_regularization(stored, new, rows, valid).item()
    assert value == pytest.approx(_bce(0.5, 0.25))


def test_graph_regularization_without_edges_is_constant_zero():
    value = graph_regularization(
        np.zeros((2, 2)), Tensor(np.full((2, 2), 0.5)), np.zeros(0, dtype=int), np.zeros((0, 2), bool)
    )
    assert value.item() == 0.0
    assert value.node is None


def test_graph_regularization_alignment():
    with pytest.raises(ValueError):
        graph_regularization(np.zeros((2, 2)), Tensor(np.zeros((3, 3))), [0], np.ones((1, 3), bool))


def test_graph_regularization_gradient():
    rng = np.random.default_rng(0)
    stored = rng.uniform(0.1, 0.9, size=(4, 4))
    new = Tensor(rng.uniform(0.2, 0.8, size=(4, 4)), requires_grad=True)
    rows = np.array([1, 3])
    valid = np.array([[True, False, True, True], [True, True, False, False]])
    error = grad_check(lambda: graph_regularization(stored, new, rows, valid), [new])
    assert error < 1e-6


def test_total_loss_combines_terms():
    ctx = Tensor([1.0, 3.0])
    tgt = Tensor([0.5, 1.5, 1.0])
    reg = Tensor(0.2)
    weights = LossWeights(lambda_c=2.0, lambda_t=0.5, lambda_g=10.0)
    assert total_loss(ctx, tgt, reg, weights).item() == pytest.approx(2 * 2.0 + 0.5 * 1.0 + 10 * 0.2)


def test_total_loss_without_context():
    tgt = Tensor([2.0])
    weights = LossWeights()
    assert total_loss(None, tgt, None, weights).item() == pytest.approx(2.0)
    assert total_loss(Tensor(np.zeros(0)), tgt, None, weights).item() == pytest.approx(2.0)
