"""
Aggregation of per-run result files into a per-method summary.
"""

from __future__ import annotations

from collections.abc import Sequence
from pathlib import Path

import numpy as np

from ..evaluation import fmt, read_csv, write_csv

SUMMARY_FILE = "summary.csv"
SUMMARY_HEADER = ("method", "runs", "acc_mean", "acc_std", "fgt_mean", "fgt_std")


def _mean_std(values: list[float]) -> tuple[float, float]:
    arr = np.asarray(values, dtype=np.float64)
    std = float(arr.std(ddof=1)) if arr.size > 1 else 0.0
    return float(arr.mean()), std


def summarize(results_dir: str | Path, files: Sequence[str | Path] | None = None) -> Path:
    """
    Mean and sample standard deviation of ACC and FGT per method over the
    per-run result files of a directory.

    :param results_dir: Directory holding the per-run result files.
    :param files: Result files to aggregate; defaults to every `*_results.csv` of the directory.
    :return: Path of the written `summary.csv`.
    :raise FileNotFoundError: If the directory is missing or holds no result files.
    """
    results_dir = Path(results_dir)
    if not results_dir.is_dir():
        raise FileNotFoundError(f"Results directory '{results_dir}' does not exist.")
    if files is None:
        files = sorted(results_dir.glob("*_results.csv"))
    if not files:
        raise FileNotFoundError(f"No per-run result files found in '{results_dir}'.")

    acc: dict[str, list[float]] = {}
    fgt: dict[str, list[float]] = {}
    for file in files:
        for row in read_csv(file):
            acc.setdefault(row["method"], []).append(float(row["acc"]))
            fgt.setdefault(row["method"], []).append(float(row["fgt"]))

    rows = []
    for method in sorted(acc):
        acc_mean, acc_std = _mean_std(acc[method])
        fgt_mean, fgt_std = _mean_std(fgt[method])
        rows.append(
            [method, str(len(acc[method])), fmt(acc_mean), fmt(acc_std), fmt(fgt_mean), fmt(fgt_std)]
        )
    return write_csv(results_dir / SUMMARY_FILE, SUMMARY_HEADER, rows)
