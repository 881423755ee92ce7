"""
Relational graphs: edge probabilities, sampling, propagation and ensembled prediction.
"""

from .edges import (
    EDGE_EPS,
    EdgeMatrix,
    EdgeMode,
    KernelParams,
    kernel_matrix,
    logistic_noise,
    propagate,
    remove_self_edges,
    sample_hard,
    sample_relaxed,
)
from .ensemble import ContextSource, EmptyMemoryError, predict_ensemble
from .export import format_graph_csv, graph_summary, write_graph_csv

__all__ = [
    "EDGE_EPS",
    "ContextSource",
    "EdgeMatrix",
    "EdgeMode",
    "EmptyMemoryError",
    "KernelParams",
    "format_graph_csv",
    "graph_summary",
    "kernel_matrix",
    "logistic_noise",
    "predict_ensemble",
    "propagate",
    "remove_self_edges",
    "sample_hard",
    "sample_relaxed",
    "write_graph_csv",
]
