"""
Fixed-capacity episodic memory with reservoir sampling and the
consolidation ledger of stored edge probabilities.
"""

from __future__ import annotations

import copy
from enum import Enum

import numpy as np

from ..relgraph import EdgeMatrix


class RegRows(str, Enum):
    """
    Selection of the stored graph rows that are regularized.

    CONSOLIDATED: every row consolidated since its slot was (re)filled.
    LATEST: only the rows refreshed at the most recent consolidation.
    """

    CONSOLIDATED = "consolidated"
    LATEST = "latest"


def reservoir(n_seen: int, capacity: int, rng: np.random.Generator) -> int:
    """
    Slot for the n_seen-th stream item (1-based) under Algorithm R.

    :return: The slot index, or -1 if the item is discarded.
    """
    if n_seen <= capacity:
        return n_seen - 1
    j = int(rng.integers(0, n_seen))
    if j < capacity:
        return j
    return -1


class EpisodicMemory:
    """
    Memory of at most `capacity` (features, label) pairs.

    Besides the samples, every slot carries a row of the stored context
    graph, a consolidation flag and the lowest context loss observed since
    the slot was filled. Stored graph entries are only meaningful where
    the slot is consolidated.
    """

    def __init__(self, capacity: int, feature_dim: int):
        """
        :param capacity: Number of slots.
        :param feature_dim: Length of a feature vector.
        :raise ValueError: If capacity is negative or feature_dim is not positive.
        """
        if capacity < 0:
            raise ValueError("Memory capacity cannot be negative.")
        if feature_dim < 1:
            raise ValueError("Feature dimension must be positive.")
        self._capacity = int(capacity)
        self._feature_dim = int(feature_dim)
        self._features = np.zeros((capacity, feature_dim))
        self._labels = np.zeros(capacity, dtype=np.int64)
        self._stored_graph = np.zeros((capacity, capacity))
        self._consolidated = np.zeros(capacity, dtype=bool)
        self._best_loss = np.full(capacity, np.inf)
        self._last_updated = np.zeros(0, dtype=np.int64)
        self._size = 0
        self._n_seen = 0

    def __repr__(self) -> str:
        return (
            f"EpisodicMemory(capacity={self._capacity}, size={self._size}, "
            + f"n_seen={self._n_seen}, consolidated={int(self._consolidated.sum())})"
        )

    def __len__(self) -> int:
        return self._size

    @property
    def capacity(self) -> int:
        return self._capacity

    @property
    def feature_dim(self) -> int:
        return self._feature_dim

    @property
    def size(self) -> int:
        """
        Number of occupied slots.
        """
        return self._size

    @property
    def n_seen(self) -> int:
        """
        Number of stream examples offered so far.
        """
        return self._n_seen

    @property
    def is_empty(self) -> bool:
        return self._size == 0

    @property
    def features(self) -> np.ndarray:
        """
        Features of the occupied slots (read-only view).
        """
        return self._readonly(self._features[: self._size])

    @property
    def labels(self) -> np.ndarray:
        return self._readonly(self._labels[: self._size])

    @property
    def stored_graph(self) -> np.ndarray:
        """
        Stored edge probabilities between the occupied slots (read-only view).
        """
        return self._readonly(self._stored_graph[: self._size, : self._size])

    @property
    def consolidated(self) -> np.ndarray:
        return self._readonly(self._consolidated[: self._size])

    @property
    def best_loss(self) -> np.ndarray:
        return self._readonly(self._best_loss[: self._size])

    @property
    def last_updated(self) -> np.ndarray:
        return self._readonly(self._last_updated)

    @staticmethod
    def _readonly(array: np.ndarray) -> np.ndarray:
        view = array.view()
        view.flags.writeable = False
        return view

    def reservoir_update(
        self, features: np.ndarray, label: int, rng: np.random.Generator
    ) -> int | None:
        """
        Offer one stream example to the memory.

        :param features: Feature vector of the example.
        :param label: Class label of the example.
        :param rng: Random number generator of the training stream.
        :return: The slot the example was written to, or None if it was discarded.
        """
        features = np.asarray(features, dtype=np.float64).reshape(-1)
        if features.shape[0] != self._feature_dim:
            raise ValueError(
                f"Expected {self._feature_dim} features, got {features.shape[0]}."
            )
        self._n_seen += 1
        if self._capacity == 0:
            return None
        slot = reservoir(self._n_seen, self._capacity, rng)
        if slot < 0:
            return None
        if slot == self._size:
            self._size += 1
        else:
            self._reset_slot(slot)
        self._features[slot] = features
        self._labels[slot] = int(label)
        return slot

    def _reset_slot(self, slot: int) -> None:
        self._stored_graph[slot, :] = 0.0
        self._stored_graph[:, slot] = 0.0
        self._consolidated[slot] = False
        self._best_loss[slot] = np.inf
        self._last_updated = self._last_updated[self._last_updated != slot]

    def consolidate(
        self, per_slot_losses: np.ndarray, current_p: EdgeMatrix | np.ndarray
    ) -> np.ndarray:
        """
        Refresh the stored edges of every slot whose context loss reaches a new low.

        :param per_slot_losses: Context loss per occupied slot.
        :param current_p: Edge probabilities among the occupied slots, self edges removed.
        :return: Sorted indices of the refreshed rows.
        :raise ValueError: If the inputs are not aligned with the occupied slots.
        """
        losses = np.asarray(per_slot_losses, dtype=np.float64).reshape(-1)
        p = current_p.values if isinstance(current_p, EdgeMatrix) else np.asarray(current_p)
        n = self._size
        if losses.shape[0] != n or p.shape != (n, n):
            raise ValueError(
                f"Consolidation inputs {losses.shape}, {p.shape} do not match {n} occupied slots."
            )
        if np.any(p < 0.0) or np.any(p > 1.0):
            raise ValueError("Edge probabilities must lie in [0, 1].")

        updated = np.flatnonzero(losses < self._best_loss[:n])
        for i in updated:
            self._best_loss[i] = losses[i]
            self._stored_graph[i, :n] = p[i]
            self._stored_graph[:n, i] = p[i]
            self._consolidated[i] = True
        self._last_updated = updated.astype(np.int64)
        return updated

    def regularization_rows(self, mode: RegRows | str = RegRows.CONSOLIDATED) -> np.ndarray:
        """
        Rows of the stored graph regularized at the next step.
        """
        if RegRows(mode) == RegRows.LATEST:
            return np.sort(self._last_updated)
        return np.flatnonzero(self._consolidated[: self._size])

    def edge_validity(self, rows: np.ndarray) -> np.ndarray:
        """
        Mask of the stored edges (rows x occupied slots) that may be regularized:
        both endpoints consolidated and no self edge.
        """
        rows = np.asarray(rows, dtype=np.int64)
        n = self._size
        valid = np.tile(self._consolidated[:n], (rows.shape[0], 1))
        valid &= self._consolidated[rows][:, None]
        valid[np.arange(rows.shape[0]), rows] = False
        return valid

    def sample(
        self, count: int, rng: np.random.Generator
    ) -> tuple[np.ndarray, np.ndarray]:
        """
        Draw min(count, size) stored examples uniformly without replacement.
        """
        count = min(count, self._size)
        choice = rng.choice(self._size, size=count, replace=False)
        return self._features[choice].copy(), self._labels[choice].copy()

    def snapshot(self) -> EpisodicMemory:
        """
        Independent copy, frozen for evaluation.
        """
        return copy.deepcopy(self)

    @classmethod
    def from_arrays(
        cls,
        capacity: int,
        features: np.ndarray,
        labels: np.ndarray,
        stored_graph: np.ndarray,
        consolidated: np.ndarray,
        best_loss: np.ndarray,
        n_seen: int,
        last_updated: np.ndarray | None = None,
    ) -> EpisodicMemory:
        """
        Rebuild a memory from the arrays of its occupied slots.
        """
        features = np.asarray(features, dtype=np.float64)
        size = features.shape[0]
        if size > capacity or n_seen < size:
            raise ValueError("Inconsistent memory state.")
        if (
            np.asarray(labels).shape != (size,)
            or np.asarray(stored_graph).shape != (size, size)
            or np.asarray(consolidated).shape != (size,)
            or np.asarray(best_loss).shape != (size,)
        ):
            raise ValueError("Memory arrays are not aligned with the stored features.")
        mem = cls(capacity, features.shape[1])
        mem._features[:size] = features
        mem._labels[:size] = np.asarray(labels, dtype=np.int64)
        mem._stored_graph[:size, :size] = stored_graph
        mem._consolidated[:size] = np.asarray(consolidated, dtype=bool)
        mem._best_loss[:size] = best_loss
        mem._size = size
        mem._n_seen = int(n_seen)
        if last_updated is not None:
            mem._last_updated = np.asarray(last_updated, dtype=np.int64)
        return mem


def memory_bytes(
    capacity: int,
    feature_dim: int,
    include_graph: bool = True,
    embedding_dim: int | None = None,
) -> int:
    """
    Storage of the memory in bytes at 32-bit precision.

    :param capacity: Number of slots.
    :param feature_dim: Length of a feature vector.
    :param include_graph: Account for the stored context graph.
    :param embedding_dim: If given, the graph is re-derived from stored
        embeddings of this size instead of being stored as a dense matrix.
    :return: capacity * feature_dim * 4 + capacity * 4 (+ graph storage).
    """
    if capacity < 0 or feature_dim < 0 or (embedding_dim is not None and embedding_dim < 0):
        raise ValueError("Memory dimensions cannot be negative.")
    total = capacity * feature_dim * 4 + capacity * 4
    if include_graph:
        if embedding_dim is None:
            total += capacity * capacity * 4
        else:
            total += capacity * embedding_dim * 4
    return total
