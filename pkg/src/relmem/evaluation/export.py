"""
CSV artifacts: result rows, result matrices and generic tables.

All files use `,` as delimiter, `.` as decimal separator and LF line endings.
"""

from __future__ import annotations

import csv
from collections.abc import Iterable, Sequence
from pathlib import Path

import numpy as np

from .metrics import ResultMatrix, accuracy, forgetting

RESULTS_HEADER = ("method", "seed", "task_count", "acc", "fgt")


def fmt(value: float) -> str:
    """
    Fixed six-decimal rendering used by every numeric CSV cell.
    """
    return f"{float(value):.6f}"


def write_csv(path: str | Path, header: Sequence[str], rows: Iterable[Sequence[object]]) -> Path:
    path = Path(path)
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, delimiter=",", lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow(row)
    return path


def read_csv(path: str | Path) -> list[dict[str, str]]:
    with open(path, encoding="utf-8", newline="") as f:
        return list(csv.DictReader(f))


def results_row(method: str, seed: int, r: ResultMatrix) -> list[str]:
    """
    One `method,seed,task_count,acc,fgt` row.
    """
    return [method, str(seed), str(r.num_tasks), fmt(accuracy(r)), fmt(forgetting(r))]


def write_results_csv(path: str | Path, rows: Iterable[Sequence[str]]) -> Path:
    return write_csv(path, RESULTS_HEADER, rows)


def write_result_matrix_csv(path: str | Path, r: ResultMatrix) -> Path:
    """
    Wide format: header `R_0_0,R_0_1,...`, one row of values.
    """
    values = r.values
    t = r.num_tasks
    header = [f"R_{i}_{j}" for i in range(t) for j in range(t)]
    return write_csv(path, header, [[fmt(v) for v in values.reshape(-1)]])


def read_result_matrix_csv(path: str | Path) -> ResultMatrix:
    rows = read_csv(path)
    if len(rows) != 1:
        raise ValueError(f"Expected exactly one row of values in {path}.")
    cells = rows[0]
    t = int(round(np.sqrt(len(cells))))
    if t * t != len(cells):
        raise ValueError(f"{path} does not hold a square result matrix.")
    values = np.array([[float(cells[f"R_{i}_{j}"]) for j in range(t)] for i in range(t)])
    return ResultMatrix.from_array(values)
