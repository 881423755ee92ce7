"""
Memory snapshot dump in the checkpoint container format.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from ..nets import CheckpointError, load_checkpoint, save_checkpoint
from .episodic import EpisodicMemory

_REQUIRED = (
    "mem/features",
    "mem/labels",
    "mem/graph",
    "mem/best_loss",
    "mem/consolidated",
    "mem/meta",
)


def save_memory(path: str | Path, mem: EpisodicMemory) -> Path:
    """
    Write the occupied slots of a memory to a snapshot file.

    `mem/meta` holds [capacity, size, n_seen, feature_dim].
    """
    return save_checkpoint(
        path,
        {
            "mem/features": mem.features.reshape(mem.size, mem.feature_dim),
            "mem/labels": mem.labels.astype(np.float64),
            "mem/graph": mem.stored_graph,
            "mem/best_loss": mem.best_loss,
            "mem/consolidated": mem.consolidated.astype(np.float64),
            "mem/last_updated": mem.last_updated.astype(np.float64),
            "mem/meta": np.array(
                [mem.capacity, mem.size, mem.n_seen, mem.feature_dim], dtype=np.float64
            ),
        },
    )


def load_memory(path: str | Path) -> EpisodicMemory:
    """
    Read a memory snapshot file.

    :raise CheckpointError: If a required record is missing or inconsistent.
    """
    records = load_checkpoint(path)
    missing = [name for name in _REQUIRED if name not in records]
    if missing:
        raise CheckpointError(f"Memory snapshot lacks records {missing}.")
    capacity, size, n_seen, feature_dim = (int(v) for v in records["mem/meta"])
    try:
        return EpisodicMemory.from_arrays(
            capacity=capacity,
            features=records["mem/features"].reshape(size, feature_dim),
            labels=records["mem/labels"].astype(np.int64),
            stored_graph=records["mem/graph"],
            consolidated=records["mem/consolidated"] > 0.5,
            best_loss=records["mem/best_loss"],
            n_seen=n_seen,
            last_updated=records.get("mem/last_updated", np.zeros(0)).astype(np.int64),
        )
    except ValueError as e:
        raise CheckpointError(f"Inconsistent memory snapshot: {e}") from e
