"""
Random relational graphs over the episodic memory.

The context graph G connects memory samples among each other, the
context-target graph A connects memory samples to the current batch.
Both are matrices of independent Bernoulli edges whose means are given
by an RBF kernel on the image embeddings. During training the edges are
sampled with the Binary-Concrete relaxation, at test time hard samples
are drawn.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from ..tensors import (
    Tensor,
    add,
    add_scalar,
    clamp,
    exp,
    log,
    matmul,
    mul,
    pairwise_sqdist,
    row_normalize_sum1,
    scalar_mul,
    sigmoid,
)

# Edge probabilities are clamped to [EDGE_EPS, 1 - EDGE_EPS] before logits and cross-entropies.
EDGE_EPS = 1e-6
_NOISE_EPS = 1e-12


class EdgeMode(str, Enum):
    PROBABILITIES = "probabilities"
    SOFT_SAMPLE = "soft_sample"
    HARD_SAMPLE = "hard_sample"


@dataclass(frozen=True)
class EdgeMatrix:
    """
    A rows x cols matrix of edge probabilities or of a sampled adjacency.
    """

    entries: Tensor
    mode: EdgeMode

    def __post_init__(self) -> None:
        values = self.entries.values
        if values.ndim != 2:
            raise ValueError(f"Edge matrices are two-dimensional, got shape {values.shape}.")
        if self.mode == EdgeMode.HARD_SAMPLE:
            if not np.all((values == 0.0) | (values == 1.0)):
                raise ValueError("Hard samples must be binary.")
        elif np.any(values < 0.0) or np.any(values > 1.0):
            raise ValueError(f"Entries of a {self.mode.value} matrix must lie in [0, 1].")

    @property
    def rows(self) -> int:
        return self.entries.shape[0]

    @property
    def cols(self) -> int:
        return self.entries.shape[1]

    @property
    def values(self) -> np.ndarray:
        return self.entries.values


class KernelParams:
    """
    Learnable RBF bandwidth and the Concrete temperatures of G and A.
    """

    def __init__(
        self,
        tau: float | Tensor = 1.0,
        concrete_temp_g: float = 1.0,
        concrete_temp_a: float = 5.0,
    ):
        if not isinstance(tau, Tensor):
            tau = Tensor(float(tau), requires_grad=True)
        if tau.shape != ():
            raise ValueError("The kernel bandwidth tau is a scalar.")
        if tau.item() <= 0:
            raise ValueError("The kernel bandwidth tau must be positive.")
        if concrete_temp_g <= 0 or concrete_temp_a <= 0:
            raise ValueError("Concrete temperatures must be positive.")
        self.tau = tau
        self.concrete_temp_g = float(concrete_temp_g)
        self.concrete_temp_a = float(concrete_temp_a)

    def __repr__(self) -> str:
        return (
            f"KernelParams(tau={self.tau.item()}, "
            + f"concrete_temp_g={self.concrete_temp_g}, "
            + f"concrete_temp_a={self.concrete_temp_a})"
        )


def kernel_matrix(u_a: Tensor, u_b: Tensor, tau: Tensor) -> EdgeMatrix:
    """
    Edge probabilities exp(-tau/2 * ||u_i - u_j||^2).

    :param u_a: Embeddings of the row samples (n x d1).
    :param u_b: Embeddings of the column samples (m x d1).
    :param tau: Scalar bandwidth.
    :return: Probability matrix (n x m), differentiable w.r.t. both embeddings and tau.
    """
    if tau.item() <= 0:
        raise ValueError("The kernel bandwidth tau must be positive.")
    sqdist = pairwise_sqdist(u_a, u_b)
    return EdgeMatrix(exp(scalar_mul(mul(sqdist, tau), -0.5)), EdgeMode.PROBABILITIES)


def remove_self_edges(g: EdgeMatrix) -> EdgeMatrix:
    """
    Zero the diagonal of a square edge matrix.
    """
    if g.rows != g.cols:
        raise ValueError(f"Self edges exist only in square graphs, got {g.rows}x{g.cols}.")
    off_diagonal = Tensor(1.0 - np.eye(g.rows))
    return EdgeMatrix(mul(g.entries, off_diagonal), g.mode)


def logistic_noise(uniforms: np.ndarray) -> np.ndarray:
    """
    Map U(0, 1) draws to logistic noise log(u) - log(1 - u).
    """
    u = np.clip(uniforms, _NOISE_EPS, 1.0 - _NOISE_EPS)
    return np.log(u) - np.log1p(-u)


def sample_relaxed(
    p: EdgeMatrix,
    temperature: float,
    rng: np.random.Generator | None = None,
    uniforms: np.ndarray | None = None,
) -> EdgeMatrix:
    """
    Binary-Concrete sample sigmoid((logit(p) + logit(u)) / temperature).

    The uniform noise enters the tape as a constant, so gradients flow
    only through the reparameterized expression in p.

    :param p: Edge probabilities.
    :param temperature: Relaxation temperature; small values approach hard samples.
    :param rng: Source of the uniform noise.
    :param uniforms: Explicit U(0, 1) noise of the same shape as p, overrides rng.
    :return: Soft sample with entries in (0, 1).
    :raise ValueError: If the temperature is not positive or no noise source is given.
    """
    if temperature <= 0:
        raise ValueError("Concrete temperature must be positive.")
    if uniforms is None:
        if rng is None:
            raise ValueError("Either rng or uniforms must be given.")
        uniforms = rng.random(p.values.shape)
    elif uniforms.shape != p.values.shape:
        raise ValueError(f"Noise shape {uniforms.shape} does not match {p.values.shape}.")

    clamped = clamp(p.entries, EDGE_EPS, 1.0 - EDGE_EPS)
    logits = add(log(clamped), scalar_mul(log(add_scalar(scalar_mul(clamped, -1.0), 1.0)), -1.0))
    noisy = add(logits, Tensor(logistic_noise(uniforms)))
    return EdgeMatrix(sigmoid(scalar_mul(noisy, 1.0 / temperature)), EdgeMode.SOFT_SAMPLE)


def sample_hard(p: EdgeMatrix, rng: np.random.Generator) -> EdgeMatrix:
    """
    Independent Bernoulli draws; the result carries no gradient.
    """
    draws = (rng.random(p.values.shape) < p.values).astype(np.float64)
    return EdgeMatrix(Tensor(draws), EdgeMode.HARD_SAMPLE)


def propagate(adj: EdgeMatrix, v_context: Tensor) -> Tensor:
    """
    Context-aware representations Z = rownorm(adj) @ V_C.

    Rows of adj summing below the degeneracy threshold attend uniformly to all context samples.
    """
    return matmul(row_normalize_sum1(adj.entries), v_context)
