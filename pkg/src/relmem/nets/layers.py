"""
Affine layers and their initialization.
"""

from __future__ import annotations

import numpy as np

from ..tensors import Tensor, add_broadcast_row, matmul


class Linear:
    """
    Affine map x -> x W + b with W of shape (fan_in, fan_out).
    """

    def __init__(self, weight: Tensor, bias: Tensor) -> None:
        if weight.ndim != 2 or bias.shape != (weight.shape[1],):
            raise ValueError(
                f"Incompatible linear layer shapes: weight {weight.shape}, bias {bias.shape}."
            )
        self.weight = weight
        self.bias = bias

    @property
    def fan_in(self) -> int:
        return self.weight.shape[0]

    @property
    def fan_out(self) -> int:
        return self.weight.shape[1]

    def __call__(self, x: Tensor) -> Tensor:
        return add_broadcast_row(matmul(x, self.weight), self.bias)

    def parameters(self, prefix: str) -> dict[str, Tensor]:
        return {f"{prefix}.weight": self.weight, f"{prefix}.bias": self.bias}


def init_linear(rng: np.random.Generator, fan_in: int, fan_out: int) -> Linear:
    """
    Draw weights from U(-a, a) with a = sqrt(6 / (fan_in + fan_out)); biases are zero.
    """
    bound = np.sqrt(6.0 / (fan_in + fan_out))
    weight = Tensor(rng.uniform(-bound, bound, size=(fan_in, fan_out)), requires_grad=True)
    bias = Tensor(np.zeros(fan_out), requires_grad=True)
    return Linear(weight, bias)
