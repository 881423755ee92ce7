"""
Online continual-learning loop, training steps and optimizers.
"""

from .optim import SGD, Adam, Optimizer, make_optimizer
from .steps import (
    MIN_TAU,
    STEP_LOG_HEADER,
    GCLTerms,
    StepLog,
    gcl_loss,
    train_step_er,
    train_step_finetune,
    train_step_gcl,
)
from .stream import (
    RunOutput,
    TrainingAbortedError,
    make_predictor,
    run_stream,
    write_step_log_csv,
)

__all__ = [
    "MIN_TAU",
    "STEP_LOG_HEADER",
    "SGD",
    "Adam",
    "GCLTerms",
    "Optimizer",
    "RunOutput",
    "StepLog",
    "TrainingAbortedError",
    "gcl_loss",
    "make_optimizer",
    "make_predictor",
    "run_stream",
    "train_step_er",
    "train_step_finetune",
    "train_step_gcl",
    "write_step_log_csv",
]
