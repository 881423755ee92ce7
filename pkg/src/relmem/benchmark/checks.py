"""
Finite-difference check of the full training objective on a tiny model.
"""

from __future__ import annotations

import numpy as np

from ..nets import ArchConfig, init_params
from ..objective import LossWeights
from ..relgraph import KernelParams
from ..tensors import grad_check
from ..trainer import gcl_loss

GRAD_CHECK_TOLERANCE = 1e-3


def gcl_grad_check(seed: int = 0, eps: float = 1e-5, deterministic: bool = False) -> float:
    """
    Max relative error between the analytic and numeric gradient of the
    training objective with respect to every network parameter and tau.

    Uses four context slots, three targets and a stored graph with two
    consolidated rows, so all three loss terms contribute.
    """
    rng = np.random.default_rng(seed)
    arch = ArchConfig(4, 3, trunk_widths=(5,), d1=3, d_img=3, d_lab=2)
    stack = init_params(arch, seed)
    kernel = KernelParams(0.8)

    m, n = 4, 3
    x_context = rng.random((m, arch.input_dim))
    y_context = np.array([0, 1, 2, 0])
    x_target = rng.random((n, arch.input_dim))
    y_target = np.array([2, 0, 1])
    stored = rng.uniform(0.1, 0.9, size=(m, m))
    stored = (stored + stored.T) / 2.0
    np.fill_diagonal(stored, 0.0)
    rows = np.array([0, 2])
    valid = np.ones((rows.shape[0], m), dtype=bool)
    valid[np.arange(rows.shape[0]), rows] = False
    # keep uniforms off 0 and 1 so the logistic noise stays moderate
    noise_g = rng.uniform(0.05, 0.95, size=(m, m))
    noise_a = rng.uniform(0.05, 0.95, size=(n, m))
    weights = LossWeights(lambda_c=1.0, lambda_t=1.0, lambda_g=1.0)

    def objective():
        return gcl_loss(
            stack,
            kernel,
            x_context,
            y_context,
            x_target,
            y_target,
            weights,
            noise_g=noise_g,
            noise_a=noise_a,
            stored_graph=stored,
            reg_rows=rows,
            reg_valid=valid,
            deterministic=deterministic,
        ).total

    params = [*stack.parameters().values(), kernel.tau]
    return grad_check(objective, params, eps=eps)
