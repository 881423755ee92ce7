"""
Dense tensors and reverse-mode automatic differentiation.
"""

from .errors import DomainError, NonFiniteError, ShapeError
from .gradcheck import grad_check
from .tensor import (
    DEGENERATE_ROW_SUM,
    OpKind,
    Tape,
    TapeNode,
    Tensor,
    add,
    add_broadcast_row,
    add_scalar,
    backward,
    binary_cross_entropy,
    clamp,
    concat_cols,
    current_tape,
    exp,
    forward,
    log,
    matmul,
    matrix_row_weighted_sum,
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

__all__ = [
    "DEGENERATE_ROW_SUM",
    "DomainError",
    "NonFiniteError",
    "OpKind",
    "ShapeError",
    "Tape",
    "TapeNode",
    "Tensor",
    "add",
    "add_broadcast_row",
    "add_scalar",
    "backward",
    "binary_cross_entropy",
    "clamp",
    "concat_cols",
    "current_tape",
    "exp",
    "forward",
    "grad_check",
    "log",
    "matmul",
    "matrix_row_weighted_sum",
    "mean",
    "mul",
    "no_grad",
    "pairwise_sqdist",
    "reduce_sum",
    "relu",
    "row_normalize_sum1",
    "scalar_mul",
    "sigmoid",
    "softmax",
    "softmax_cross_entropy",
    "take_rows",
]
