"""
relmem
======

Online continual learning with random graphs over an episodic memory.
"""

try:
    from .__version__ import __version__
except ImportError:  # not installed, no generated version file
    __version__ = "0.0.0"

from .cli import console_entry_point  # noqa: E402
from .benchmark import benchmark as run_benchmark  # noqa: E402

__all__ = ["__version__", "console_entry_point", "run_benchmark"]
