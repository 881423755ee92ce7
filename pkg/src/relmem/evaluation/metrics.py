"""
Result matrix bookkeeping and the average accuracy / forgetting metrics.
"""

from __future__ import annotations

from collections.abc import Callable, Sequence

import numpy as np

from ..data import Task


class ResultMatrix:
    """
    R[i][j]: test accuracy on task j after the model has finished task i.
    """

    def __init__(self, num_tasks: int):
        if num_tasks < 1:
            raise ValueError("A result matrix needs at least one task.")
        self._values = np.full((num_tasks, num_tasks), np.nan)

    def __repr__(self) -> str:
        return f"ResultMatrix(num_tasks={self.num_tasks})"

    @classmethod
    def from_array(cls, values: np.ndarray | Sequence[Sequence[float]]) -> ResultMatrix:
        values = np.asarray(values, dtype=np.float64)
        if values.ndim != 2 or values.shape[0] != values.shape[1] or values.shape[0] == 0:
            raise ValueError(f"Result matrices are square and nonempty, got {values.shape}.")
        result = cls(values.shape[0])
        for i, row in enumerate(values):
            result.set_row(i, row)
        return result

    @property
    def num_tasks(self) -> int:
        return self._values.shape[0]

    @property
    def values(self) -> np.ndarray:
        return self._values.copy()

    def set_row(self, i: int, accuracies: np.ndarray | Sequence[float]) -> None:
        """
        Store the accuracies on all tasks after finishing task i.

        :raise ValueError: If the row length is wrong or an entry is outside [0, 1].
        """
        row = np.asarray(accuracies, dtype=np.float64)
        if row.shape != (self.num_tasks,):
            raise ValueError(f"Expected {self.num_tasks} accuracies, got {row.shape}.")
        if np.any(row < 0.0) or np.any(row > 1.0):
            raise ValueError("Accuracies must lie in [0, 1].")
        self._values[i] = row

    def is_complete(self) -> bool:
        return not np.any(np.isnan(self._values))


def _as_array(r: ResultMatrix | np.ndarray | Sequence[Sequence[float]]) -> np.ndarray:
    values = r.values if isinstance(r, ResultMatrix) else np.asarray(r, dtype=np.float64)
    if values.size == 0:
        raise ValueError("Empty result matrix.")
    if values.ndim != 2 or values.shape[0] != values.shape[1]:
        raise ValueError(f"Result matrices are square, got {values.shape}.")
    return values


def accuracy(r: ResultMatrix | np.ndarray | Sequence[Sequence[float]]) -> float:
    """
    Mean of the final row.
    """
    values = _as_array(r)
    return float(values[-1].mean())


def forgetting(r: ResultMatrix | np.ndarray | Sequence[Sequence[float]]) -> float:
    """
    Mean over the tasks 0..T-2 of R[i][i] - R[T-1][i]; positive values mean forgetting.
    A single task has no forgetting.
    """
    values = _as_array(r)
    t = values.shape[0]
    if t < 2:
        return 0.0
    idx = np.arange(t - 1)
    return float(np.mean(values[idx, idx] - values[t - 1, idx]))


def accuracy_curve(r: ResultMatrix | np.ndarray | Sequence[Sequence[float]]) -> np.ndarray:
    """
    Average accuracy over the tasks seen so far, after each task.
    """
    values = _as_array(r)
    return np.array([values[i, : i + 1].mean() for i in range(values.shape[0])])


def evaluate_model(
    predict_fn: Callable[[np.ndarray], np.ndarray], test_tasks: Sequence[Task]
) -> np.ndarray:
    """
    Fraction of argmax-correct predictions on the test set of every task.

    :param predict_fn: Maps a feature batch to class scores (n x num_classes).
    :param test_tasks: Tasks whose test splits are evaluated.
    :return: One accuracy per task.
    """
    if not test_tasks:
        raise ValueError("No test tasks given.")
    row = np.zeros(len(test_tasks))
    for j, task in enumerate(test_tasks):
        if task.n_test == 0:
            continue
        scores = np.asarray(predict_fn(task.test_x.astype(np.float64)))
        if scores.shape[0] != task.n_test:
            raise ValueError(
                f"Predictor returned {scores.shape[0]} rows for {task.n_test} samples."
            )
        row[j] = float(np.mean(np.argmax(scores, axis=1) == task.test_y))
    return row
