"""
Finite-difference checks of every differentiable operation.
"""

import numpy as np
import pytest

from relmem.tensors import (  # type: ignore
    NonFiniteError,
    Tensor,
    add,
    add_broadcast_row,
    add_scalar,
    binary_cross_entropy,
    clamp,
    concat_cols,
    exp,
    grad_check,
    log,
    matmul,
    matrix_row_weighted_sum,
    mean,
    mul,
    pairwise_sqdist,
    reduce_sum,
    relu,
    row_normalize_sum1,
    scalar_mul,
    sigmoid,
    softmax_cross_entropy,
    take_rows,
)

TOLERANCE = 1e-6


def _param(rng, shape, low=-1.0, high=1.0):
    return Tensor(rng.uniform(low, high, size=shape), requires_grad=True)


def _weights(rng, shape):
    return Tensor(rng.normal(size=shape))


def test_unary_operations():
    rng = np.random.default_rng(1)
    x = _param(rng, (3, 4))
    # keep relu and clamp inputs away from their kinks
    x.values[np.abs(x.values) < 0.05] = 0.3
    x.values[np.abs(np.abs(x.values) - 0.6) < 0.05] = 0.3
    w = _weights(rng, (3, 4))
    for op in (
        relu,
        sigmoid,
        exp,
        lambda a: scalar_mul(a, -1.7),
        lambda a: add_scalar(a, 0.4),
        lambda a: clamp(a, -0.6, 0.6),
    ):
        error = grad_check(lambda: reduce_sum(mul(op(x), w)), [x])
        assert error < TOLERANCE


def test_log_gradient():
    rng = np.random.default_rng(2)
    x = _param(rng, (2, 3), low=0.5, high=2.0)
    w = _weights(rng, (2, 3))
    assert grad_check(lambda: reduce_sum(mul(log(x), w)), [x]) < TOLERANCE


def test_binary_operations():
    rng = np.random.default_rng(3)
    a = _param(rng, (3, 4))
    b = _param(rng, (3, 4))
    w = _weights(rng, (3, 4))
    assert grad_check(lambda: reduce_sum(mul(add(a, b), w)), [a, b]) < TOLERANCE
    assert grad_check(lambda: reduce_sum(mul(mul(a, b), w)), [a, b]) < TOLERANCE
    assert grad_check(lambda: reduce_sum(matrix_row_weighted_sum(a, b)), [a, b]) < TOLERANCE


def test_scalar_multiplier():
    rng = np.random.default_rng(4)
    a = _param(rng, (2, 3))
    c = Tensor(0.7, requires_grad=True)
    w = _weights(rng, (2, 3))
    assert grad_check(lambda: reduce_sum(mul(mul(a, c), w)), [a, c]) < TOLERANCE


def test_linear_layer():
    rng = np.random.default_rng(5)
    x = _param(rng, (4, 3))
    weight = _param(rng, (3, 2))
    bias = _param(rng, (2,))
    w = _weights(rng, (4, 2))
    error = grad_check(
        lambda: reduce_sum(mul(add_broadcast_row(matmul(x, weight), bias), w)),
        [x, weight, bias],
    )
    assert error < TOLERANCE


def test_concat_and_take_rows():
    rng = np.random.default_rng(6)
    a = _param(rng, (3, 2))
    b = _param(rng, (3, 1))
    w = _weights(rng, (4, 3))
    error = grad_check(
        lambda: reduce_sum(mul(take_rows(concat_cols(a, b), [0, 2, 2, 1]), w)), [a, b]
    )
    assert error < TOLERANCE


def test_row_normalize_and_distances():
    rng = np.random.default_rng(7)
    a = _param(rng, (3, 4), low=0.1, high=1.0)
    w = _weights(rng, (3, 4))
    assert grad_check(lambda: reduce_sum(mul(row_normalize_sum1(a), w)), [a]) < TOLERANCE

    u = _param(rng, (3, 2))
    v = _param(rng, (4, 2))
    w = _weights(rng, (3, 4))
    assert grad_check(lambda: reduce_sum(mul(pairwise_sqdist(u, v), w)), [u, v]) < TOLERANCE


def test_cross_entropies():
    rng = np.random.default_rng(8)
    logits = _param(rng, (4, 3), low=-3.0, high=3.0)
    target = Tensor(np.eye(3)[[0, 2, 1, 2]])
    assert grad_check(lambda: mean(softmax_cross_entropy(logits, target)), [logits]) < TOLERANCE

    p = _param(rng, (2, 3), low=0.1, high=0.9)
    q = _param(rng, (2, 3), low=0.0, high=1.0)
    assert grad_check(lambda: reduce_sum(binary_cross_entropy(q, p)), [p, q]) < TOLERANCE


def test_constant_function_has_zero_gradient():
    x = Tensor([1.0, 2.0], requires_grad=True)
    assert grad_check(lambda: Tensor(3.0), [x]) == 0.0


def test_grad_check_detects_wrong_gradient():
    x = Tensor([0.5, -0.3], requires_grad=True)

    def broken():
        # no tape: the analytic gradient is zero, the numeric one is not
        return Tensor(float(np.sum(x.values**2)))

    assert grad_check(broken, [x]) > 0.1


def test_grad_check_arguments():
    x = Tensor([1.0])
    with pytest.raises(ValueError):
        grad_check(lambda: reduce_sum(x), [x])
    y = Tensor([1.0], requires_grad=True)
    with pytest.raises(ValueError):
        grad_check(lambda: reduce_sum(y), [y], eps=0.0)


def test_grad_check_non_finite():
    x = Tensor([700.0], requires_grad=True)
    with pytest.raises(NonFiniteError):
        grad_check(lambda: reduce_sum(exp(exp(scalar_mul(x, 0.01)))), [x], eps=1e-5)
