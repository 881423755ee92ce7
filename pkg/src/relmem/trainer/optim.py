"""
First-order optimizers acting in place on tensor values.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from collections.abc import Mapping

import numpy as np

from ..tensors import Tensor


class Optimizer(ABC):
    """
    This abstract base class defines the interface for all optimizers.
    """

    def __init__(self, params: Mapping[str, Tensor], learning_rate: float):
        if learning_rate <= 0:
            raise ValueError("Learning rate should be positive.")
        self.params = dict(params)
        self.learning_rate = float(learning_rate)

    def zero_grad(self) -> None:
        for p in self.params.values():
            p.zero_grad()

    @abstractmethod
    def step(self) -> None:
        """
        Update every parameter from its accumulated gradient.
        """


class SGD(Optimizer):
    def step(self) -> None:
        for p in self.params.values():
            if p.grad is not None:
                p.values -= self.learning_rate * p.grad


class Adam(Optimizer):
    """
    Adam with bias-corrected first and second moment estimates.
    """

    def __init__(
        self,
        params: Mapping[str, Tensor],
        learning_rate: float = 0.001,
        beta1: float = 0.9,
        beta2: float = 0.999,
        eps: float = 1e-8,
    ):
        super().__init__(params, learning_rate)
        self.beta1 = beta1
        self.beta2 = beta2
        self.eps = eps
        self.t = 0
        self.m = {name: np.zeros_like(p.values) for name, p in self.params.items()}
        self.v = {name: np.zeros_like(p.values) for name, p in self.params.items()}

    def step(self) -> None:
        self.t += 1
        correction1 = 1.0 - self.beta1**self.t
        correction2 = 1.0 - self.beta2**self.t
        for name, p in self.params.items():
            if p.grad is None:
                continue
            self.m[name] = self.beta1 * self.m[name] + (1.0 - self.beta1) * p.grad
            self.v[name] = self.beta2 * self.v[name] + (1.0 - self.beta2) * p.grad**2
            m_hat = self.m[name] / correction1
            v_hat = self.v[name] / correction2
            p.values -= self.learning_rate * m_hat / (np.sqrt(v_hat) + self.eps)


def make_optimizer(
    name: str,
    params: Mapping[str, Tensor],
    learning_rate: float,
    beta1: float = 0.9,
    beta2: float = 0.999,
    eps: float = 1e-8,
) -> Optimizer:
    if name == "adam":
        return Adam(params, learning_rate, beta1, beta2, eps)
    if name == "sgd":
        return SGD(params, learning_rate)
    raise ValueError(f"Unknown optimizer '{name}'.")
