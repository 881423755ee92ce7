"""
Episodic memory, consolidation ledger and storage accounting.
"""

from .episodic import EpisodicMemory, RegRows, memory_bytes, reservoir
from .io import load_memory, save_memory

__all__ = [
    "EpisodicMemory",
    "RegRows",
    "load_memory",
    "memory_bytes",
    "reservoir",
    "save_memory",
]
