"""
Test-time prediction averaged over sampled context-target graphs.
"""

from __future__ import annotations

from typing import Protocol

import numpy as np

from ..nets import EncoderStack, one_hot
from ..tensors import Tensor, no_grad, softmax
from .edges import KernelParams, kernel_matrix, propagate, sample_hard


class EmptyMemoryError(RuntimeError):
    """
    Raised when a prediction needs context samples but the memory is empty.
    Callers are expected to fall back to a uniform prediction.
    """


class ContextSource(Protocol):
    """
    Anything exposing the features and labels of the occupied memory slots.
    """

    @property
    def features(self) -> np.ndarray: ...

    @property
    def labels(self) -> np.ndarray: ...


def predict_ensemble(
    x_target: np.ndarray,
    context: ContextSource,
    stack: EncoderStack,
    kernel: KernelParams,
    samples: int = 30,
    rng: np.random.Generator | None = None,
    deterministic: bool = False,
) -> np.ndarray:
    """
    Class probabilities for a batch of targets.

    :param x_target: Target features (n x input_dim).
    :param context: Frozen memory snapshot.
    :param stack: Encoder stack.
    :param kernel: Kernel parameters.
    :param samples: Number of hard samples of A to average over.
    :param rng: Random number generator of the evaluation stream.
    :param deterministic: Use the edge probabilities as adjacency instead of sampling.
    :return: Mean of the per-sample softmax distributions (n x num_classes).
    :raise EmptyMemoryError: If the context holds no samples.
    """
    if samples < 1:
        raise ValueError("At least one graph sample is required.")
    features = np.asarray(context.features)
    if features.shape[0] == 0:
        raise EmptyMemoryError("Cannot attend to an empty memory; predict uniformly instead.")
    if not deterministic and rng is None:
        raise ValueError("Sampled prediction requires a random number generator.")

    num_classes = stack.config.num_classes
    with no_grad():
        x_context = Tensor(features)
        u_context = stack.encode_graph(x_context)
        v_context = stack.encode_latent(x_context, Tensor(one_hot(context.labels, num_classes)))
        u_target = stack.encode_graph(Tensor(x_target))
        p_a = kernel_matrix(u_target, u_context, kernel.tau)

        if deterministic:
            return softmax(stack.classify(propagate(p_a, v_context)).values)

        probs = np.zeros((p_a.rows, num_classes))
        for _ in range(samples):
            a = sample_hard(p_a, rng)  # type: ignore[arg-type]
            probs += softmax(stack.classify(propagate(a, v_context)).values)
    return probs / samples
