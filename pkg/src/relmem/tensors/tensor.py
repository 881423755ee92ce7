"""
Dense float64 tensors with a define-by-run tape for reverse-mode
automatic differentiation.

Every operation is a `Function` subclass registered for one `OpKind`.
`forward` evaluates it on the input values and, if any input requires a
gradient, appends a `TapeNode` to the thread-local tape. `backward` walks
the tape in reverse recording order, which is a reverse topological order
of the computation graph.
"""

from __future__ import annotations

import threading
from collections.abc import Callable, Iterator
from contextlib import contextmanager
from dataclasses import dataclass, field
from enum import Enum
from typing import Any

import numpy as np

from .errors import DomainError, NonFiniteError, ShapeError

# Rows of a nonnegative matrix summing below this value normalize to uniform weights.
DEGENERATE_ROW_SUM = 1e-8


class OpKind(str, Enum):
    """
    Catalogue of the differentiable operations.
    """

    MATMUL = "matmul"
    ADD = "add"
    ADD_BROADCAST_ROW = "add_broadcast_row"
    SCALAR_MUL = "scalar_mul"
    ADD_SCALAR = "add_scalar"
    MUL = "mul"
    RELU = "relu"
    SIGMOID = "sigmoid"
    EXP = "exp"
    LOG = "log"
    CLAMP = "clamp"
    CONCAT_COLS = "concat_cols"
    ROW_NORMALIZE_SUM1 = "row_normalize_sum1"
    PAIRWISE_SQDIST = "pairwise_sqdist"
    MEAN = "mean"
    SUM = "sum"
    SOFTMAX_CROSS_ENTROPY = "softmax_cross_entropy"
    BINARY_CROSS_ENTROPY = "binary_cross_entropy"
    MATRIX_ROW_WEIGHTED_SUM = "matrix_row_weighted_sum"
    TAKE_ROWS = "take_rows"


class Tensor:
    """
    A dense row-major array of 64-bit floats with an optional gradient buffer.
    """

    def __init__(self, values: Any, requires_grad: bool = False) -> None:
        """
        Initialize a tensor from anything `numpy.array` accepts.
        The values are copied.

        :param values: The tensor values.
        :param requires_grad: Whether gradients are accumulated for this tensor.
        :raise NonFiniteError: If any value is NaN or Inf.
        """
        arr = np.array(values, dtype=np.float64)
        if not np.all(np.isfinite(arr)):
            raise NonFiniteError("tensor")
        self.values: np.ndarray = arr
        self.requires_grad: bool = requires_grad
        self.grad: np.ndarray | None = np.zeros_like(arr) if requires_grad else None
        self.node: TapeNode | None = None

    @classmethod
    def _wrap(cls, values: np.ndarray, requires_grad: bool) -> Tensor:
        """
        Wrap an operation result without copying it.
        """
        out = cls.__new__(cls)
        out.values = values
        out.requires_grad = requires_grad
        out.grad = np.zeros_like(values) if requires_grad else None
        out.node = None
        return out

    def __repr__(self) -> str:
        return (
            f"Tensor(shape={self.shape}, requires_grad={self.requires_grad}, "
            + f"values={self.values})"
        )

    @property
    def shape(self) -> tuple[int, ...]:
        """
        Get the shape of the tensor.
        """
        return self.values.shape

    @property
    def ndim(self) -> int:
        return self.values.ndim

    @property
    def size(self) -> int:
        return int(self.values.size)

    @property
    def is_leaf(self) -> bool:
        """
        A leaf tensor was not produced by a recorded operation.
        """
        return self.node is None

    def item(self) -> float:
        """
        Return the value of a single-element tensor as a Python float.
        """
        if self.values.size != 1:
            raise ValueError(f"item() needs a single-element tensor, got {self.shape}.")
        return float(self.values.reshape(-1)[0])

    def zero_grad(self) -> None:
        """
        Reset the gradient buffer to zeros.
        """
        if self.requires_grad:
            self.grad = np.zeros_like(self.values)

    def detach(self) -> Tensor:
        """
        Return a constant copy that is not connected to the tape.
        """
        return Tensor(self.values)


@dataclass(eq=False)
class TapeNode:
    """
    One recorded operation: its kind, inputs, output and the values
    cached by the forward pass for the backward pass.
    """

    op_kind: OpKind
    inputs: tuple[Tensor, ...]
    output: Tensor
    saved: dict[str, Any] = field(default_factory=dict)


class Tape:
    """
    Ordered record of the operations executed since the last reset.
    """

    def __init__(self) -> None:
        self.nodes: list[TapeNode] = []
        self.recording: bool = True

    def __len__(self) -> int:
        return len(self.nodes)

    def record(self, node: TapeNode) -> None:
        self.nodes.append(node)

    def reset(self) -> None:
        """
        Drop all recorded nodes and detach their outputs.
        """
        for node in self.nodes:
            node.output.node = None
        self.nodes = []


_state = threading.local()


def current_tape() -> Tape:
    """
    Get the tape of the calling thread, creating it on first use.
    """
    tape = getattr(_state, "tape", None)
    if tape is None:
        tape = Tape()
        _state.tape = tape
    return tape


@contextmanager
def no_grad() -> Iterator[None]:
    """
    Context manager in which operations are evaluated without being recorded.
    """
    tape = current_tape()
    previous = tape.recording
    tape.recording = False
    try:
        yield
    finally:
        tape.recording = previous


class Function:
    """
    Base class of all tensor operations.
    """

    @staticmethod
    def forward(saved: dict[str, Any], *arrays: np.ndarray, **attrs: Any) -> np.ndarray:
        """
        Compute the output values and store what the backward pass needs in `saved`.
        """
        raise NotImplementedError

    @staticmethod
    def backward(saved: dict[str, Any], grad: np.ndarray) -> tuple[np.ndarray | None, ...]:
        """
        Map the output gradient to one gradient per input.
        """
        raise NotImplementedError


_FUNCTIONS: dict[OpKind, type[Function]] = {}


def register(kind: OpKind) -> Callable[[type[Function]], type[Function]]:
    def decorator(cls: type[Function]) -> type[Function]:
        _FUNCTIONS[kind] = cls
        return cls

    return decorator


def forward(op_kind: OpKind | str, *inputs: Tensor, **attrs: Any) -> Tensor:
    """
    Evaluate one catalogue operation and extend the tape by one node.

    :param op_kind: The operation to apply.
    :param inputs: The input tensors.
    :param attrs: Non-tensor operation attributes (constants, indices, bounds).
    :return: The output tensor.
    :raise ShapeError: If the input shapes are incompatible.
    :raise DomainError: If an input lies outside of the operation's domain.
    :raise NonFiniteError: If the output contains NaN or Inf.
    """
    kind = OpKind(op_kind)
    for x in inputs:
        if not isinstance(x, Tensor):
            raise TypeError(f"'{kind.value}' expects Tensor inputs, got {type(x)}.")
    saved: dict[str, Any] = {}
    with np.errstate(all="ignore"):
        values = _FUNCTIONS[kind].forward(saved, *[x.values for x in inputs], **attrs)
    if not np.all(np.isfinite(values)):
        raise NonFiniteError(kind.value)
    tape = current_tape()
    requires_grad = tape.recording and any(x.requires_grad for x in inputs)
    out = Tensor._wrap(values, requires_grad)
    if requires_grad:
        node = TapeNode(kind, tuple(inputs), out, saved)
        out.node = node
        tape.record(node)
    return out


def backward(loss: Tensor) -> None:
    """
    Accumulate d(loss)/d(leaf) into the `grad` buffer of every leaf tensor
    that requires a gradient, then reset the tape.

    :param loss: A scalar tensor produced by recorded operations.
    :raise ValueError: If the loss is not a scalar.
    :raise RuntimeError: If the loss has no recorded history.
    """
    if loss.values.shape != ():
        raise ValueError(f"backward needs a scalar loss, got shape {loss.shape}.")
    tape = current_tape()
    if loss.node is None or not tape.nodes:
        raise RuntimeError("backward called on a tensor without recorded history.")

    grads: dict[int, np.ndarray] = {id(loss): np.ones(())}
    leaves: dict[int, Tensor] = {}
    for node in reversed(tape.nodes):
        grad = grads.pop(id(node.output), None)
        if grad is None:
            continue
        node.output.grad = grad
        input_grads = _FUNCTIONS[node.op_kind].backward(node.saved, grad)
        for inp, inp_grad in zip(node.inputs, input_grads):
            if inp_grad is None or not inp.requires_grad:
                continue
            key = id(inp)
            if key in grads:
                grads[key] = grads[key] + inp_grad
            else:
                grads[key] = inp_grad
            if inp.is_leaf:
                leaves[key] = inp

    for key, leaf in leaves.items():
        if leaf.grad is None:
            leaf.grad = np.zeros_like(leaf.values)
        leaf.grad += grads[key]
    tape.reset()


def _expect(condition: bool, op: str, arrays: tuple[np.ndarray, ...], detail: str) -> None:
    if not condition:
        raise ShapeError(op, [a.shape for a in arrays], detail)


@register(OpKind.MATMUL)
class MatMul(Function):
    @staticmethod
    def forward(saved, a, b):
        _expect(
            a.ndim == 2 and b.ndim == 2 and a.shape[1] == b.shape[0],
            "matmul",
            (a, b),
            "expected (n, k) @ (k, m)",
        )
        saved["a"], saved["b"] = a, b
        return a @ b

    @staticmethod
    def backward(saved, grad):
        return grad @ saved["b"].T, saved["a"].T @ grad


@register(OpKind.ADD)
class Add(Function):
    @staticmethod
    def forward(saved, a, b):
        _expect(a.shape == b.shape, "add", (a, b), "expected equal shapes")
        return a + b

    @staticmethod
    def backward(saved, grad):
        return grad, grad


@register(OpKind.ADD_BROADCAST_ROW)
class AddBroadcastRow(Function):
    @staticmethod
    def forward(saved, a, b):
        _expect(
            a.ndim == 2 and b.ndim == 1 and a.shape[1] == b.shape[0],
            "add_broadcast_row",
            (a, b),
            "expected (n, m) + (m,)",
        )
        return a + b[None, :]

    @staticmethod
    def backward(saved, grad):
        return grad, grad.sum(axis=0)


@register(OpKind.SCALAR_MUL)
class ScalarMul(Function):
    @staticmethod
    def forward(saved, a, *, c: float):
        saved["c"] = float(c)
        return a * saved["c"]

    @staticmethod
    def backward(saved, grad):
        return (grad * saved["c"],)


@register(OpKind.ADD_SCALAR)
class AddScalar(Function):
    @staticmethod
    def forward(saved, a, *, c: float):
        return a + float(c)

    @staticmethod
    def backward(saved, grad):
        return (grad,)


@register(OpKind.MUL)
class Mul(Function):
    @staticmethod
    def forward(saved, a, b):
        _expect(
            a.shape == b.shape or b.ndim == 0,
            "mul",
            (a, b),
            "expected equal shapes or a scalar right operand",
        )
        saved["a"], saved["b"] = a, b
        return a * b

    @staticmethod
    def backward(saved, grad):
        a, b = saved["a"], saved["b"]
        grad_b = grad * a
        if b.ndim == 0 and a.ndim != 0:
            grad_b = np.asarray(grad_b.sum())
        return grad * b, grad_b


@register(OpKind.RELU)
class Relu(Function):
    @staticmethod
    def forward(saved, a):
        saved["mask"] = a > 0
        return np.where(saved["mask"], a, 0.0)

    @staticmethod
    def backward(saved, grad):
        return (grad * saved["mask"],)


@register(OpKind.SIGMOID)
class Sigmoid(Function):
    @staticmethod
    def forward(saved, a):
        # tanh form does not overflow for large |a|
        out = 0.5 * (1.0 + np.tanh(0.5 * a))
        saved["out"] = out
        return out

    @staticmethod
    def backward(saved, grad):
        out = saved["out"]
        return (grad * out * (1.0 - out),)


@register(OpKind.EXP)
class Exp(Function):
    @staticmethod
    def forward(saved, a):
        out = np.exp(a)
        saved["out"] = out
        return out

    @staticmethod
    def backward(saved, grad):
        return (grad * saved["out"],)


@register(OpKind.LOG)
class Log(Function):
    @staticmethod
    def forward(saved, a):
        if np.any(a <= 0):
            raise DomainError("log", "input must be strictly positive")
        saved["a"] = a
        return np.log(a)

    @staticmethod
    def backward(saved, grad):
        return (grad / saved["a"],)


@register(OpKind.CLAMP)
class Clamp(Function):
    @staticmethod
    def forward(saved, a, *, lo: float, hi: float):
        if lo > hi:
            raise DomainError("clamp", f"lower bound {lo} exceeds upper bound {hi}")
        saved["inside"] = (a > lo) & (a < hi)
        return np.clip(a, lo, hi)

    @staticmethod
    def backward(saved, grad):
        return (grad * saved["inside"],)


@register(OpKind.CONCAT_COLS)
class ConcatCols(Function):
    @staticmethod
    def forward(saved, a, b):
        _expect(
            a.ndim == 2 and b.ndim == 2 and a.shape[0] == b.shape[0],
            "concat_cols",
            (a, b),
            "expected equal row counts",
        )
        saved["split"] = a.shape[1]
        return np.concatenate([a, b], axis=1)

    @staticmethod
    def backward(saved, grad):
        split = saved["split"]
        return grad[:, :split], grad[:, split:]


@register(OpKind.ROW_NORMALIZE_SUM1)
class RowNormalizeSum1(Function):
    @staticmethod
    def forward(saved, a):
        _expect(a.ndim == 2 and a.shape[1] > 0, "row_normalize_sum1", (a,), "expected (n, m>0)")
        if np.any(a < 0):
            raise DomainError("row_normalize_sum1", "entries must be nonnegative")
        sums = a.sum(axis=1)
        degenerate = sums < DEGENERATE_ROW_SUM
        safe = np.where(degenerate, 1.0, sums)
        out = a / safe[:, None]
        out[degenerate] = 1.0 / a.shape[1]
        saved["out"], saved["sums"], saved["degenerate"] = out, safe, degenerate
        return out

    @staticmethod
    def backward(saved, grad):
        out, sums = saved["out"], saved["sums"]
        inner = (grad * out).sum(axis=1, keepdims=True)
        grad_a = (grad - inner) / sums[:, None]
        grad_a[saved["degenerate"]] = 0.0
        return (grad_a,)


@register(OpKind.PAIRWISE_SQDIST)
class PairwiseSqdist(Function):
    @staticmethod
    def forward(saved, a, b):
        _expect(
            a.ndim == 2 and b.ndim == 2 and a.shape[1] == b.shape[1],
            "pairwise_sqdist",
            (a, b),
            "expected (n, d) and (m, d)",
        )
        diff = a[:, None, :] - b[None, :, :]
        saved["diff"] = diff
        return np.einsum("ijk,ijk->ij", diff, diff)

    @staticmethod
    def backward(saved, grad):
        weighted = 2.0 * grad[:, :, None] * saved["diff"]
        return weighted.sum(axis=1), -weighted.sum(axis=0)


@register(OpKind.MEAN)
class Mean(Function):
    @staticmethod
    def forward(saved, a):
        if a.size == 0:
            raise DomainError("mean", "empty input")
        saved["shape"] = a.shape
        return np.asarray(a.mean())

    @staticmethod
    def backward(saved, grad):
        shape = saved["shape"]
        return (np.full(shape, float(grad) / max(1, int(np.prod(shape)))),)


@register(OpKind.SUM)
class Sum(Function):
    @staticmethod
    def forward(saved, a):
        saved["shape"] = a.shape
        return np.asarray(a.sum())

    @staticmethod
    def backward(saved, grad):
        return (np.full(saved["shape"], float(grad)),)


@register(OpKind.SOFTMAX_CROSS_ENTROPY)
class SoftmaxCrossEntropy(Function):
    @staticmethod
    def forward(saved, logits, target):
        _expect(
            logits.ndim == 2 and logits.shape == target.shape,
            "softmax_cross_entropy",
            (logits, target),
            "expected logits and targets of equal (n, c) shape",
        )
        shifted = logits - logits.max(axis=1, keepdims=True)
        log_probs = shifted - np.log(np.exp(shifted).sum(axis=1, keepdims=True))
        saved["log_probs"], saved["target"] = log_probs, target
        return -(target * log_probs).sum(axis=1)

    @staticmethod
    def backward(saved, grad):
        log_probs, target = saved["log_probs"], saved["target"]
        probs = np.exp(log_probs)
        grad_logits = grad[:, None] * (probs * target.sum(axis=1, keepdims=True) - target)
        return grad_logits, -grad[:, None] * log_probs


@register(OpKind.BINARY_CROSS_ENTROPY)
class BinaryCrossEntropy(Function):
    @staticmethod
    def forward(saved, target, p):
        _expect(target.shape == p.shape, "binary_cross_entropy", (target, p), "expected equal shapes")
        if np.any(p <= 0) or np.any(p >= 1):
            raise DomainError("binary_cross_entropy", "probabilities must lie in (0, 1)")
        saved["target"], saved["p"] = target, p
        return -(target * np.log(p) + (1.0 - target) * np.log1p(-p))

    @staticmethod
    def backward(saved, grad):
        target, p = saved["target"], saved["p"]
        grad_target = grad * (np.log1p(-p) - np.log(p))
        grad_p = grad * ((1.0 - target) / (1.0 - p) - target / p)
        return grad_target, grad_p


@register(OpKind.MATRIX_ROW_WEIGHTED_SUM)
class MatrixRowWeightedSum(Function):
    @staticmethod
    def forward(saved, m, w):
        _expect(
            m.ndim == 2 and m.shape == w.shape,
            "matrix_row_weighted_sum",
            (m, w),
            "expected matrix and weights of equal (n, k) shape",
        )
        saved["m"], saved["w"] = m, w
        return (m * w).sum(axis=1)

    @staticmethod
    def backward(saved, grad):
        return grad[:, None] * saved["w"], grad[:, None] * saved["m"]


@register(OpKind.TAKE_ROWS)
class TakeRows(Function):
    @staticmethod
    def forward(saved, a, *, index):
        index = np.asarray(index, dtype=np.int64)
        _expect(a.ndim >= 1 and index.ndim == 1, "take_rows", (a, index), "expected 1-d index")
        if index.size and (index.min() < -a.shape[0] or index.max() >= a.shape[0]):
            raise ShapeError("take_rows", [a.shape, index.shape], "index out of range")
        saved["index"], saved["shape"] = index, a.shape
        return a[index]

    @staticmethod
    def backward(saved, grad):
        grad_a = np.zeros(saved["shape"])
        np.add.at(grad_a, saved["index"], grad)
        return (grad_a,)


# Functional interface


def matmul(a: Tensor, b: Tensor) -> Tensor:
    return forward(OpKind.MATMUL, a, b)


def add(a: Tensor, b: Tensor) -> Tensor:
    return forward(OpKind.ADD, a, b)


def add_broadcast_row(a: Tensor, b: Tensor) -> Tensor:
    return forward(OpKind.ADD_BROADCAST_ROW, a, b)


def scalar_mul(a: Tensor, c: float) -> Tensor:
    return forward(OpKind.SCALAR_MUL, a, c=c)


def add_scalar(a: Tensor, c: float) -> Tensor:
    return forward(OpKind.ADD_SCALAR, a, c=c)


def mul(a: Tensor, b: Tensor) -> Tensor:
    return forward(OpKind.MUL, a, b)


def relu(a: Tensor) -> Tensor:
    return forward(OpKind.RELU, a)


def sigmoid(a: Tensor) -> Tensor:
    return forward(OpKind.SIGMOID, a)


def exp(a: Tensor) -> Tensor:
    return forward(OpKind.EXP, a)


def log(a: Tensor) -> Tensor:
    return forward(OpKind.LOG, a)


def clamp(a: Tensor, lo: float, hi: float) -> Tensor:
    return forward(OpKind.CLAMP, a, lo=lo, hi=hi)


def concat_cols(a: Tensor, b: Tensor) -> Tensor:
    return forward(OpKind.CONCAT_COLS, a, b)


def row_normalize_sum1(a: Tensor) -> Tensor:
    return forward(OpKind.ROW_NORMALIZE_SUM1, a)


def pairwise_sqdist(a: Tensor, b: Tensor) -> Tensor:
    return forward(OpKind.PAIRWISE_SQDIST, a, b)


def mean(a: Tensor) -> Tensor:
    return forward(OpKind.MEAN, a)


def reduce_sum(a: Tensor) -> Tensor:
    return forward(OpKind.SUM, a)


def softmax_cross_entropy(logits: Tensor, target: Tensor) -> Tensor:
    """
    Per-row cross-entropy between softmax(logits) and the target distribution.
    """
    return forward(OpKind.SOFTMAX_CROSS_ENTROPY, logits, target)


def binary_cross_entropy(target: Tensor, p: Tensor) -> Tensor:
    """
    Elementwise cross-entropy between Bernoulli(target) and Bernoulli(p).
    """
    return forward(OpKind.BINARY_CROSS_ENTROPY, target, p)


def matrix_row_weighted_sum(m: Tensor, w: Tensor) -> Tensor:
    return forward(OpKind.MATRIX_ROW_WEIGHTED_SUM, m, w)


def take_rows(a: Tensor, index: np.ndarray | list[int]) -> Tensor:
    return forward(OpKind.TAKE_ROWS, a, index=index)


def softmax(logits: np.ndarray) -> np.ndarray:
    """
    Row-wise softmax of plain values (no tape involved).
    """
    shifted = logits - logits.max(axis=1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=1, keepdims=True)
