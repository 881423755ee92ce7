"""
Central finite-difference check of the reverse-mode gradients.
"""

from __future__ import annotations

from collections.abc import Callable, Sequence

import numpy as np

from .errors import NonFiniteError
from .tensor import Tensor, backward, current_tape, no_grad


def grad_check(
    fn: Callable[[], Tensor], params: Sequence[Tensor], eps: float = 1e-5
) -> float:
    """
    Compare the analytic gradient of a scalar function with central
    finite differences.

    The function is evaluated repeatedly and must be deterministic, i.e.
    any noise it consumes has to be fixed beforehand.

    :param fn: Closure computing a scalar tensor from the parameters.
    :param params: Leaf tensors with `requires_grad` set.
    :param eps: Finite-difference step.
    :return: max over all parameter entries of |analytic - numeric| / max(1, |numeric|).
    :raise NonFiniteError: If a perturbed evaluation is not finite.
    """
    if eps <= 0:
        raise ValueError("Finite-difference step must be positive.")
    for p in params:
        if not p.requires_grad:
            raise ValueError("All checked parameters must require gradients.")
        p.zero_grad()

    current_tape().reset()
    loss = fn()
    if loss.node is None:
        # constant in the parameters
        analytic = [np.zeros_like(p.values) for p in params]
    else:
        backward(loss)
        analytic = [np.array(p.grad) for p in params]

    max_error = 0.0
    with no_grad():
        for p, grad in zip(params, analytic):
            for idx in np.ndindex(p.shape):
                original = p.values[idx]
                p.values[idx] = original + eps
                f_plus = fn().item()
                p.values[idx] = original - eps
                f_minus = fn().item()
                p.values[idx] = original
                numeric = (f_plus - f_minus) / (2.0 * eps)
                if not np.isfinite(numeric):
                    raise NonFiniteError("grad_check")
                error = abs(grad[idx] - numeric) / max(1.0, abs(numeric))
                max_error = max(max_error, float(error))
    return max_error
