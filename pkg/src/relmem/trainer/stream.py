"""
The online continual-learning loop over a task stream.
"""

from __future__ import annotations

import warnings
from collections.abc import Callable
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ..data import TaskStream
from ..evaluation import ResultMatrix, accuracy_curve, evaluate_model, write_csv
from ..memory import EpisodicMemory
from ..nets import (
    ArchConfig,
    ClassifierStack,
    EncoderStack,
    init_classifier,
    init_params,
    save_checkpoint,
)
from ..prog import Stream, TrainConfig, stream_rng, stream_seed
from ..relgraph import EmptyMemoryError, KernelParams, predict_ensemble
from ..tensors import NonFiniteError, Tensor, no_grad, softmax
from .optim import make_optimizer
from .steps import STEP_LOG_HEADER, StepLog, train_step_er, train_step_finetune, train_step_gcl


class TrainingAbortedError(RuntimeError):
    """
    Raised when a run produces non-finite values; carries the path of the
    diagnostic parameter dump, if one was written.
    """

    def __init__(self, message: str, dump_path: Path | None = None):
        self.dump_path = dump_path
        if dump_path is not None:
            message += f" Diagnostic dump: {dump_path}"
        super().__init__(message)


@dataclass
class RunOutput:
    """
    Everything a finished run produces.
    """

    results: ResultMatrix
    logs: list[StepLog]
    memory: EpisodicMemory
    stack: EncoderStack | ClassifierStack
    kernel: KernelParams | None = None
    curve: list[float] = field(default_factory=list)


def write_step_log_csv(path: str | Path, logs: list[StepLog]) -> Path:
    return write_csv(path, STEP_LOG_HEADER, (log.to_row() for log in logs))


def make_predictor(
    method: str,
    stack: EncoderStack | ClassifierStack,
    kernel: KernelParams | None,
    snapshot: EpisodicMemory,
    config: TrainConfig,
    rng: np.random.Generator,
) -> Callable[[np.ndarray], np.ndarray]:
    """
    Class-probability function of a frozen model and memory snapshot.
    """
    if method == "gcl":
        assert isinstance(stack, EncoderStack) and kernel is not None

        def predict_gcl(x: np.ndarray) -> np.ndarray:
            try:
                return predict_ensemble(
                    x,
                    snapshot,
                    stack,
                    kernel,
                    samples=config.test_samples,
                    rng=rng,
                    deterministic=config.deterministic_edges,
                )
            except EmptyMemoryError:
                warnings.warn("Empty memory at evaluation. Predicting uniformly.")
                num_classes = stack.config.num_classes
                return np.full((x.shape[0], num_classes), 1.0 / num_classes)

        return predict_gcl

    assert isinstance(stack, ClassifierStack)

    def predict_classifier(x: np.ndarray) -> np.ndarray:
        with no_grad():
            return softmax(stack.logits(Tensor(x)).values)

    return predict_classifier


def run_stream(
    stream: TaskStream,
    config: TrainConfig,
    seed: int = 0,
    arch: ArchConfig | None = None,
    dump_dir: str | Path | None = None,
    verbosity: int = 0,
    shuffle_seed: int | None = None,
) -> RunOutput:
    """
    Train on the tasks in order and evaluate on all test splits after each task.

    :param stream: Task stream; every training example is visited
        `epochs_per_task` times in stream order.
    :param config: Training configuration (method, optimizer, loss weights, ...).
    :param seed: Run seed from which the init, train, sampler and eval streams are derived.
    :param arch: Network dimensions; defaults to the standard sizes for the stream.
    :param dump_dir: Directory for the diagnostic dump of an aborted run.
    :param verbosity: 2 prints per-task accuracies, 3 also per-step losses.
    :param shuffle_seed: If given, the training order within every task is
        reshuffled on each pass with a generator seeded by it.
    :return: The result matrix, the step logs and the final memory snapshot.
    :raise TrainingAbortedError: If the run produced non-finite values.
    """
    if not stream.tasks:
        raise ValueError("A task stream needs at least one task.")
    if arch is None:
        arch = ArchConfig(stream.input_dim, stream.num_classes)
    if arch.input_dim != stream.input_dim or arch.num_classes != stream.num_classes:
        raise ValueError(f"{arch} does not fit the stream {stream}.")

    method = config.method
    init_seed = stream_seed(seed, Stream.INIT)
    train_rng = stream_rng(seed, Stream.TRAIN)
    sampler_rng = stream_rng(seed, Stream.SAMPLER)
    eval_rng = stream_rng(seed, Stream.EVAL)
    order_rng = None if shuffle_seed is None else np.random.default_rng(shuffle_seed)

    kernel: KernelParams | None = None
    stack: EncoderStack | ClassifierStack
    if method == "gcl":
        stack = init_params(arch, init_seed)
        kernel = config.kernel_params()
        params = {**stack.parameters(), "kernel.tau": kernel.tau}
    else:
        stack = init_classifier(arch, init_seed)
        params = stack.parameters()
    capacity = 0 if method == "finetune" else config.memory_capacity
    if method != "finetune" and capacity < 1:
        raise ValueError(f"Method '{method}' requires a memory capacity of at least 1.")
    mem = EpisodicMemory(capacity, stream.input_dim)
    optimizer = make_optimizer(
        config.optimizer,
        params,
        config.learning_rate,
        config.beta1,
        config.beta2,
        config.adam_eps,
    )

    results = ResultMatrix(len(stream.tasks))
    logs: list[StepLog] = []
    step = 0
    for t, task in enumerate(stream.tasks):
        for _ in range(config.epochs_per_task):
            for batch in task.batches(config.batch_size, order_rng):
                try:
                    if method == "gcl":
                        assert isinstance(stack, EncoderStack) and kernel is not None
                        log = train_step_gcl(
                            stack,
                            kernel,
                            mem,
                            batch,
                            config,
                            optimizer,
                            train_rng,
                            sampler_rng,
                            step=step,
                            task=t,
                        )
                    elif method == "er":
                        assert isinstance(stack, ClassifierStack)
                        log = train_step_er(
                            stack, mem, batch, config, optimizer, train_rng, step=step, task=t
                        )
                    else:
                        assert isinstance(stack, ClassifierStack)
                        log = train_step_finetune(
                            stack, batch, config, optimizer, step=step, task=t
                        )
                except NonFiniteError as e:
                    dump_path = None
                    if dump_dir is not None:
                        dump_path = save_checkpoint(
                            Path(dump_dir) / f"{method}_seed{seed}_abort.bin", params
                        )
                    raise TrainingAbortedError(
                        f"Run '{method}' (seed {seed}) aborted at step {step}: {e}",
                        dump_path,
                    ) from e
                logs.append(log)
                if verbosity > 2:
                    print(
                        f"Step {step:6d} | task {t} | loss {log.loss_total:10.6f} | "
                        + f"ctx {log.loss_ctx:8.4f} | tgt {log.loss_tgt:8.4f} | "
                        + f"graph {log.loss_graph:8.4f} | consolidated {log.consolidated_rows}"
                    )
                step += 1

        predictor = make_predictor(method, stack, kernel, mem.snapshot(), config, eval_rng)
        row = evaluate_model(predictor, stream.tasks)
        results.set_row(t, row)
        if verbosity > 1:
            accs = " ".join(f"{a:.3f}" for a in row)
            print(f"Finished task {t}: accuracies [{accs}]")

    curve = accuracy_curve(results).tolist()
    return RunOutput(results, logs, mem.snapshot(), stack, kernel, curve)
