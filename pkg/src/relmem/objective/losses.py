"""
Graph regularization and the total training objective.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..relgraph import EDGE_EPS
from ..tensors import (
    Tensor,
    add,
    binary_cross_entropy,
    clamp,
    matrix_row_weighted_sum,
    mean,
    reduce_sum,
    scalar_mul,
    take_rows,
)


@dataclass(frozen=True)
class LossWeights:
    """
    Weights of the context, target and graph-regularization terms.
    """

    lambda_c: float = 1.0
    lambda_t: float = 1.0
    lambda_g: float = 50.0

    def __post_init__(self) -> None:
        for name in ("lambda_c", "lambda_t", "lambda_g"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be nonnegative.")


def _clip_old(p_old: np.ndarray) -> Tensor:
    return Tensor(np.clip(p_old, EDGE_EPS, 1.0 - EDGE_EPS))


def edge_bce(p_old_row: np.ndarray, p_new_row: Tensor) -> Tensor:
    """
    Mean over edges of the cross-entropy between stored and current edge probabilities.

    The stored probabilities are constants; the gradient reaches p_new only.
    """
    p_old_row = np.asarray(p_old_row, dtype=np.float64)
    if p_old_row.shape != p_new_row.shape:
        raise ValueError(
            f"Edge rows differ in length: {p_old_row.shape} vs {p_new_row.shape}."
        )
    p_new = clamp(p_new_row, EDGE_EPS, 1.0 - EDGE_EPS)
    return mean(binary_cross_entropy(_clip_old(p_old_row), p_new))


def graph_regularization(
    stored: np.ndarray, p_new: Tensor, rows: np.ndarray, valid: np.ndarray
) -> Tensor:
    """
    Mean over the selected rows of the per-row mean edge cross-entropy.

    :param stored: Stored edge probabilities among the occupied slots (n x n).
    :param p_new: Current edge probabilities among the same slots (n x n).
    :param rows: Indices of the regularized rows.
    :param valid: Mask (len(rows) x n) of the edges taking part in each row.
    :return: Scalar loss; a constant zero if no edge is regularized.
    """
    rows = np.asarray(rows, dtype=np.int64)
    valid = np.asarray(valid, dtype=bool)
    n = p_new.shape[0]
    if np.shape(stored) != (n, n) or valid.shape != (rows.shape[0], n):
        raise ValueError("Stored graph, current graph and edge mask are misaligned.")

    counts = valid.sum(axis=1)
    active = counts > 0
    if not np.any(active):
        return Tensor(0.0)
    rows, valid, counts = rows[active], valid[active], counts[active]
    weights = valid / counts[:, None] / rows.shape[0]

    p_rows = clamp(take_rows(p_new, rows), EDGE_EPS, 1.0 - EDGE_EPS)
    bce = binary_cross_entropy(_clip_old(np.asarray(stored)[rows]), p_rows)
    return reduce_sum(matrix_row_weighted_sum(bce, Tensor(weights)))


def total_loss(
    ctx_ce: Tensor | None,
    tgt_ce: Tensor,
    graph_reg: Tensor | None,
    weights: LossWeights,
) -> Tensor:
    """
    lambda_c * mean(ctx_ce) + lambda_t * mean(tgt_ce) + lambda_g * graph_reg.

    Missing or empty context terms contribute zero.
    """
    loss = scalar_mul(mean(tgt_ce), weights.lambda_t)
    if ctx_ce is not None and ctx_ce.size > 0:
        loss = add(loss, scalar_mul(mean(ctx_ce), weights.lambda_c))
    if graph_reg is not None:
        loss = add(loss, scalar_mul(graph_reg, weights.lambda_g))
    return loss
