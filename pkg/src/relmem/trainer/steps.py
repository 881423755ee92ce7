"""
Single training steps of the graph-based model and the two baselines.

A GCL step on a batch of targets runs, in order:

1. the forward pass over memory (context) and batch (targets) with one
   relaxed sample of G and A, the loss and one optimizer step,
2. consolidation of the stored graph with the post-step edge probabilities,
3. reservoir insertion of the batch examples.

With an empty memory only the target term is trained, classifying a zero
context representation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..memory import EpisodicMemory
from ..nets import ClassifierStack, EncoderStack, one_hot
from ..objective import LossWeights, graph_regularization, total_loss
from ..prog import TrainConfig
from ..relgraph import (
    KernelParams,
    kernel_matrix,
    propagate,
    remove_self_edges,
    sample_relaxed,
)
from ..tensors import (
    NonFiniteError,
    Tensor,
    backward,
    current_tape,
    mean,
    no_grad,
    softmax_cross_entropy,
)
from .optim import Optimizer

MIN_TAU = 1e-4

STEP_LOG_HEADER = (
    "step",
    "task",
    "loss_total",
    "loss_ctx",
    "loss_tgt",
    "loss_graph",
    "consolidated_rows",
)


@dataclass(frozen=True)
class StepLog:
    """
    Loss components and memory bookkeeping of one training step.
    """

    step: int
    task: int
    loss_total: float
    loss_ctx: float
    loss_tgt: float
    loss_graph: float
    regularized_rows: int = 0
    consolidated_rows: int = 0

    def __post_init__(self) -> None:
        for name in ("loss_total", "loss_ctx", "loss_tgt", "loss_graph"):
            if not np.isfinite(getattr(self, name)):
                raise NonFiniteError(name)

    def to_row(self) -> list[str]:
        return [
            str(self.step),
            str(self.task),
            f"{self.loss_total:.6f}",
            f"{self.loss_ctx:.6f}",
            f"{self.loss_tgt:.6f}",
            f"{self.loss_graph:.6f}",
            str(self.consolidated_rows),
        ]


@dataclass
class GCLTerms:
    """
    Tensors of the full training objective.
    """

    total: Tensor
    ctx_ce: Tensor
    tgt_ce: Tensor
    graph_reg: Tensor


def gcl_loss(
    stack: EncoderStack,
    kernel: KernelParams,
    x_context: np.ndarray,
    y_context: np.ndarray,
    x_target: np.ndarray,
    y_target: np.ndarray,
    weights: LossWeights,
    noise_g: np.ndarray | None = None,
    noise_a: np.ndarray | None = None,
    stored_graph: np.ndarray | None = None,
    reg_rows: np.ndarray | None = None,
    reg_valid: np.ndarray | None = None,
    deterministic: bool = False,
) -> GCLTerms:
    """
    The training objective with explicit Concrete noise.

    :param stack: Encoder stack.
    :param kernel: Kernel parameters (tau is differentiated).
    :param x_context: Memory features (m x input_dim), m >= 1.
    :param y_context: Memory labels.
    :param x_target: Batch features (n x input_dim).
    :param y_target: Batch labels.
    :param weights: Loss weights.
    :param noise_g: U(0, 1) draws (m x m) for the relaxed context graph.
    :param noise_a: U(0, 1) draws (n x m) for the relaxed context-target graph.
    :param stored_graph: Stored edge probabilities among the memory slots (m x m).
    :param reg_rows: Regularized rows of the stored graph.
    :param reg_valid: Edge mask of the regularized rows.
    :param deterministic: Use edge probabilities instead of samples (noise ignored).
    :return: Total loss and its components; ctx_ce holds one value per memory slot.
    """
    num_classes = stack.config.num_classes
    x_c = Tensor(x_context)
    y_c = Tensor(one_hot(y_context, num_classes))
    x_t = Tensor(x_target)
    y_t = Tensor(one_hot(y_target, num_classes))

    u_c = stack.encode_graph(x_c)
    u_t = stack.encode_graph(x_t)
    v_c = stack.encode_latent(x_c, y_c)
    p_g = remove_self_edges(kernel_matrix(u_c, u_c, kernel.tau))
    p_a = kernel_matrix(u_t, u_c, kernel.tau)

    if deterministic:
        g, a = p_g, p_a
    else:
        if noise_g is None or noise_a is None:
            raise ValueError("Relaxed sampling needs noise for both graphs.")
        g = remove_self_edges(sample_relaxed(p_g, kernel.concrete_temp_g, uniforms=noise_g))
        a = sample_relaxed(p_a, kernel.concrete_temp_a, uniforms=noise_a)

    ctx_ce = softmax_cross_entropy(stack.classify(propagate(g, v_c)), y_c)
    tgt_ce = softmax_cross_entropy(stack.classify(propagate(a, v_c)), y_t)

    if stored_graph is not None and reg_rows is not None and reg_valid is not None:
        graph_reg = graph_regularization(stored_graph, p_g.entries, reg_rows, reg_valid)
    else:
        graph_reg = Tensor(0.0)
    return GCLTerms(total_loss(ctx_ce, tgt_ce, graph_reg, weights), ctx_ce, tgt_ce, graph_reg)


def _apply(loss: Tensor, optimizer: Optimizer) -> None:
    if not np.isfinite(loss.item()):
        raise NonFiniteError("loss")
    backward(loss)
    optimizer.step()


def train_step_gcl(
    stack: EncoderStack,
    kernel: KernelParams,
    mem: EpisodicMemory,
    batch: tuple[np.ndarray, np.ndarray],
    config: TrainConfig,
    optimizer: Optimizer,
    rng: np.random.Generator,
    sampler_rng: np.random.Generator | None = None,
    step: int = 0,
    task: int = 0,
) -> StepLog:
    """
    One GCL step on a batch of stream examples.

    :param rng: Training stream (reservoir decisions).
    :param sampler_rng: Concrete noise; defaults to rng.
    """
    x, y = np.asarray(batch[0], dtype=np.float64), np.asarray(batch[1])
    if x.shape[0] == 0:
        raise ValueError("Training batches should not be empty.")
    sampler_rng = rng if sampler_rng is None else sampler_rng
    weights = config.loss_weights()
    current_tape().reset()
    optimizer.zero_grad()

    consolidated = 0
    regularized = 0
    if mem.is_empty:
        z = Tensor(np.zeros((x.shape[0], stack.config.d2)))
        tgt_ce = softmax_cross_entropy(
            stack.classify(z), Tensor(one_hot(y, stack.config.num_classes))
        )
        loss = total_loss(None, tgt_ce, None, weights)
        loss_ctx = loss_graph = 0.0
        loss_tgt = float(mean(tgt_ce.detach()).item())
        _apply(loss, optimizer)
    else:
        m = mem.size
        rows = mem.regularization_rows(config.reg_rows)
        regularized = int(rows.shape[0])
        noise_g = noise_a = None
        if not config.deterministic_edges:
            noise_g = sampler_rng.random((m, m))
            noise_a = sampler_rng.random((x.shape[0], m))
        terms = gcl_loss(
            stack,
            kernel,
            np.asarray(mem.features),
            np.asarray(mem.labels),
            x,
            y,
            weights,
            noise_g=noise_g,
            noise_a=noise_a,
            stored_graph=np.asarray(mem.stored_graph),
            reg_rows=rows,
            reg_valid=mem.edge_validity(rows),
            deterministic=config.deterministic_edges,
        )
        loss = terms.total
        ctx_values = terms.ctx_ce.values.copy()
        loss_ctx = float(ctx_values.mean())
        loss_tgt = float(terms.tgt_ce.values.mean())
        loss_graph = float(terms.graph_reg.item())
        _apply(loss, optimizer)
        kernel.tau.values[...] = max(float(kernel.tau.values), MIN_TAU)

        with no_grad():
            u_c = stack.encode_graph(Tensor(np.asarray(mem.features)))
            p_post = remove_self_edges(kernel_matrix(u_c, u_c, kernel.tau))
        consolidated = int(mem.consolidate(ctx_values, p_post).shape[0])

    for features, label in zip(x, y):
        mem.reservoir_update(features, int(label), rng)

    return StepLog(
        step=step,
        task=task,
        loss_total=float(loss.item()),
        loss_ctx=loss_ctx,
        loss_tgt=loss_tgt,
        loss_graph=loss_graph,
        regularized_rows=regularized,
        consolidated_rows=consolidated,
    )


def _classifier_loss(stack: ClassifierStack, x: np.ndarray, y: np.ndarray) -> Tensor:
    logits = stack.logits(Tensor(x))
    return mean(softmax_cross_entropy(logits, Tensor(one_hot(y, stack.config.num_classes))))


def train_step_er(
    stack: ClassifierStack,
    mem: EpisodicMemory,
    batch: tuple[np.ndarray, np.ndarray],
    config: TrainConfig,
    optimizer: Optimizer,
    rng: np.random.Generator,
    step: int = 0,
    task: int = 0,
) -> StepLog:
    """
    Experience replay: cross-entropy on the batch joined with a uniform memory draw.
    """
    x, y = np.asarray(batch[0], dtype=np.float64), np.asarray(batch[1], dtype=np.int64)
    if x.shape[0] == 0:
        raise ValueError("Training batches should not be empty.")
    current_tape().reset()
    optimizer.zero_grad()

    x_all, y_all = x, y
    if not mem.is_empty:
        x_mem, y_mem = mem.sample(config.batch_size, rng)
        x_all = np.concatenate([x, x_mem])
        y_all = np.concatenate([y, y_mem])
    loss = _classifier_loss(stack, x_all, y_all)
    value = float(loss.item())
    _apply(loss, optimizer)

    for features, label in zip(x, y):
        mem.reservoir_update(features, int(label), rng)
    return StepLog(step, task, value, 0.0, value, 0.0)


def train_step_finetune(
    stack: ClassifierStack,
    batch: tuple[np.ndarray, np.ndarray],
    config: TrainConfig,
    optimizer: Optimizer,
    step: int = 0,
    task: int = 0,
) -> StepLog:
    """
    Plain online training on the batch only.
    """
    x, y = np.asarray(batch[0], dtype=np.float64), np.asarray(batch[1], dtype=np.int64)
    if x.shape[0] == 0:
        raise ValueError("Training batches should not be empty.")
    current_tape().reset()
    optimizer.zero_grad()
    loss = _classifier_loss(stack, x, y)
    value = float(loss.item())
    _apply(loss, optimizer)
    return StepLog(step, task, value, 0.0, value, 0.0)
