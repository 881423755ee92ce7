"""
This module runs the continual-learning benchmark and aggregates its results.
"""

from .checks import GRAD_CHECK_TOLERANCE, gcl_grad_check
from .main import RunRecord, benchmark, build_stream, header, single_run
from .summary import SUMMARY_FILE, SUMMARY_HEADER, summarize

__all__ = [
    "GRAD_CHECK_TOLERANCE",
    "SUMMARY_FILE",
    "SUMMARY_HEADER",
    "RunRecord",
    "benchmark",
    "build_stream",
    "gcl_grad_check",
    "header",
    "single_run",
    "summarize",
]
