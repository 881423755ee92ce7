"""
Continual-learning metrics and CSV artifacts.
"""

from .export import (
    RESULTS_HEADER,
    fmt,
    read_csv,
    read_result_matrix_csv,
    results_row,
    write_csv,
    write_result_matrix_csv,
    write_results_csv,
)
from .metrics import ResultMatrix, accuracy, accuracy_curve, evaluate_model, forgetting

__all__ = [
    "RESULTS_HEADER",
    "ResultMatrix",
    "accuracy",
    "accuracy_curve",
    "evaluate_model",
    "fmt",
    "forgetting",
    "read_csv",
    "read_result_matrix_csv",
    "results_row",
    "write_csv",
    "write_result_matrix_csv",
    "write_results_csv",
]
