"""
Test the tensor operations and the reverse-mode tape.
"""

import numpy as np
import pytest

from relmem.tensors import (  # type: ignore
    DomainError,
    NonFiniteError,
    OpKind,
    ShapeError,
    Tensor,
    add,
    add_broadcast_row,
    backward,
    binary_cross_entropy,
    clamp,
    concat_cols,
    current_tape,
    exp,
    log,
    matmul,
    mean,
    mul,
    no_grad,
    pairwise_sqdist,
    reduce_sum,
    relu,
    row_normalize_sum1,
    scalar_mul,
    sigmoid,
    softmax,
    softmax_cross_entropy,
    take_rows,
)


def test_tensor_copies_and_casts():
    source = np.array([[1, 2], [3, 4]], dtype=np.int32)
    t = Tensor(source)
    source[0, 0] = 100
    assert t.values.dtype == np.float64
    assert t.values[0, 0] == 1.0
    assert t.shape == (2, 2)
    assert t.size == 4
    assert t.is_leaf


def test_tensor_rejects_non_finite():
    with pytest.raises(NonFiniteError):
        Tensor([1.0, np.nan])
    with pytest.raises(NonFiniteError):
        Tensor(np.inf)


def test_item_requires_single_element():
    assert Tensor(2.5).item() == 2.5
    with pytest.raises(ValueError):
        Tensor([1.0, 2.0]).item()


def test_matmul_and_bias():
    a = Tensor([[1.0, 2.0], [3.0, 4.0]])
    b = Tensor([[1.0], [1.0]])
    out = add_broadcast_row(matmul(a, b), Tensor([0.5]))
    np.testing.assert_allclose(out.values, [[3.5], [7.5]])
    with pytest.raises(ShapeError):
        matmul(a, Tensor([[1.0, 2.0, 3.0]]))
    with pytest.raises(ShapeError):
        add(a, b)


def test_mul_with_scalar_operand():
    a = Tensor([[1.0, -2.0]], requires_grad=True)
    c = Tensor(3.0, requires_grad=True)
    loss = reduce_sum(mul(a, c))
    assert loss.item() == pytest.approx(-3.0)
    backward(loss)
    np.testing.assert_allclose(a.grad, [[3.0, 3.0]])
    assert c.grad == pytest.approx(-1.0)


def test_elementwise_values():
    x = Tensor([-1.0, 0.0, 2.0])
    np.testing.assert_allclose(relu(x).values, [0.0, 0.0, 2.0])
    np.testing.assert_allclose(sigmoid(x).values, 1.0 / (1.0 + np.exp(-x.values)))
    np.testing.assert_allclose(exp(x).values, np.exp(x.values))
    np.testing.assert_allclose(clamp(x, -0.5, 1.0).values, [-0.5, 0.0, 1.0])
    np.testing.assert_allclose(scalar_mul(x, -2.0).values, [2.0, 0.0, -4.0])


def test_sigmoid_saturates_without_overflow():
    out = sigmoid(Tensor([-1000.0, 1000.0]))
    np.testing.assert_allclose(out.values, [0.0, 1.0])


def test_log_domain():
    np.testing.assert_allclose(log(Tensor([1.0, np.e])).values, [0.0, 1.0])
    with pytest.raises(DomainError):
        log(Tensor([1.0, 0.0]))


def test_exp_overflow_is_non_finite():
    with pytest.raises(NonFiniteError):
        exp(Tensor([1000.0]))


def test_clamp_gradient_only_inside():
    x = Tensor([-2.0, 0.5, 3.0], requires_grad=True)
    backward(reduce_sum(clamp(x, -1.0, 1.0)))
    np.testing.assert_allclose(x.grad, [0.0, 1.0, 0.0])
    with pytest.raises(DomainError):
        clamp(x, 1.0, -1.0)


def test_concat_cols():
    out = concat_cols(Tensor([[1.0], [2.0]]), Tensor([[3.0, 4.0], [5.0, 6.0]]))
    np.testing.assert_allclose(out.values, [[1.0, 3.0, 4.0], [2.0, 5.0, 6.0]])
    with pytest.raises(ShapeError):
        concat_cols(Tensor([[1.0]]), Tensor([[1.0], [2.0]]))


def test_row_normalize():
    out = row_normalize_sum1(Tensor([[1.0, 3.0], [0.0, 0.0]]))
    np.testing.assert_allclose(out.values, [[0.25, 0.75], [0.5, 0.5]])
    with pytest.raises(DomainError):
        row_normalize_sum1(Tensor([[1.0, -1.0]]))


def test_row_normalize_degenerate_row_has_zero_gradient():
    a = Tensor([[0.0, 0.0, 0.0], [1.0, 1.0, 2.0]], requires_grad=True)
    weights = Tensor([[1.0, 2.0, 3.0], [1.0, 2.0, 3.0]])
    backward(reduce_sum(mul(row_normalize_sum1(a), weights)))
    np.testing.assert_allclose(a.grad[0], 0.0)
    assert np.any(a.grad[1] != 0.0)


def test_pairwise_sqdist():
    a = Tensor([[0.0, 0.0], [1.0, 1.0]])
    b = Tensor([[1.0, 0.0], [0.0, 0.0], [3.0, 4.0]])
    np.testing.assert_allclose(
        pairwise_sqdist(a, b).values, [[1.0, 0.0, 25.0], [1.0, 2.0, 13.0]]
    )


def test_softmax_cross_entropy_values():
    logits = Tensor([[0.0, 0.0], [10.0, 0.0]])
    target = Tensor([[1.0, 0.0], [1.0, 0.0]])
    ce = softmax_cross_entropy(logits, target)
    assert ce.shape == (2,)
    assert ce.values[0] == pytest.approx(np.log(2.0))
    assert ce.values[1] == pytest.approx(np.log1p(np.exp(-10.0)))


def test_softmax_cross_entropy_large_logits_are_stable():
    ce = softmax_cross_entropy(Tensor([[1000.0, -1000.0]]), Tensor([[0.0, 1.0]]))
    assert ce.values[0] == pytest.approx(2000.0)


def test_binary_cross_entropy_domain():
    out = binary_cross_entropy(Tensor([1.0, 0.0]), Tensor([0.5, 0.5]))
    np.testing.assert_allclose(out.values, [np.log(2.0)] * 2)
    with pytest.raises(DomainError):
        binary_cross_entropy(Tensor([1.0]), Tensor([1.0]))


def test_take_rows_accumulates_repeated_indices():
    a = Tensor([[1.0, 2.0], [3.0, 4.0], [5.0, 6.0]], requires_grad=True)
    out = take_rows(a, [2, 0, 2])
    np.testing.assert_allclose(out.values, [[5.0, 6.0], [1.0, 2.0], [5.0, 6.0]])
    backward(reduce_sum(out))
    np.testing.assert_allclose(a.grad, [[1.0, 1.0], [0.0, 0.0], [2.0, 2.0]])
    with pytest.raises(ShapeError):
        take_rows(a, [3])


def test_mean_of_empty_input():
    with pytest.raises(DomainError):
        mean(Tensor(np.zeros((0, 2))))


def test_softmax_rows_sum_to_one():
    probs = softmax(np.array([[1.0, 2.0, 3.0], [-5.0, 0.0, 5.0]]))
    np.testing.assert_allclose(probs.sum(axis=1), 1.0)


def test_tape_records_only_tracked_operations():
    x = Tensor([1.0, 2.0], requires_grad=True)
    c = Tensor([3.0, 4.0])
    add(c, c)
    assert len(current_tape()) == 0
    y = add(x, c)
    assert len(current_tape()) == 1
    assert y.node is not None
    assert y.node.op_kind == OpKind.ADD
    assert not y.is_leaf


def test_no_grad_suspends_recording():
    x = Tensor([1.0, 2.0], requires_grad=True)
    with no_grad():
        y = add(x, x)
    assert len(current_tape()) == 0
    assert not y.requires_grad
    assert current_tape().recording


def test_backward_accumulates_shared_inputs():
    x = Tensor([[1.0, 2.0]], requires_grad=True)
    loss = reduce_sum(add(mul(x, x), x))
    backward(loss)
    np.testing.assert_allclose(x.grad, [[3.0, 5.0]])
    assert len(current_tape()) == 0


def test_backward_adds_into_existing_gradient():
    x = Tensor([2.0], requires_grad=True)
    backward(reduce_sum(scalar_mul(x, 3.0)))
    backward(reduce_sum(scalar_mul(x, 3.0)))
    np.testing.assert_allclose(x.grad, [6.0])
    x.zero_grad()
    np.testing.assert_allclose(x.grad, [0.0])


def test_backward_errors():
    x = Tensor([1.0, 2.0], requires_grad=True)
    with pytest.raises(ValueError):
        backward(add(x, x))
    with pytest.raises(RuntimeError):
        backward(Tensor(1.0))


def test_detach_cuts_history():
    x = Tensor([1.0], requires_grad=True)
    y = scalar_mul(x, 2.0).detach()
    assert y.is_leaf
    assert not y.requires_grad
