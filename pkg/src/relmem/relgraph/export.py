"""
Export and inspection of the learned context graph.
"""

from __future__ import annotations

from collections.abc import Sequence
from pathlib import Path

import networkx as nx  # type: ignore
import numpy as np


def format_graph_csv(probabilities: np.ndarray, labels: Sequence[int]) -> str:
    """
    Render a square probability matrix as CSV.

    The header row names every slot as `slot<k>_c<label>`, each following
    row holds one matrix row with six decimals.
    """
    probabilities = np.asarray(probabilities, dtype=np.float64)
    n = len(labels)
    if probabilities.shape != (n, n):
        raise ValueError(
            f"Graph of shape {probabilities.shape} does not match {n} slot labels."
        )
    lines = [",".join(f"slot{k}_c{int(label)}" for k, label in enumerate(labels))]
    for row in probabilities:
        lines.append(",".join(f"{value:.6f}" for value in row))
    return "\n".join(lines) + "\n"


def write_graph_csv(path: str | Path, probabilities: np.ndarray, labels: Sequence[int]) -> Path:
    path = Path(path)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(format_graph_csv(probabilities, labels))
    return path


def graph_summary(
    probabilities: np.ndarray,
    labels: Sequence[int] | None = None,
    threshold: float = 0.5,
) -> dict[str, float | int]:
    """
    Summarize the undirected graph of all slot pairs whose edge
    probability reaches the threshold.

    :param probabilities: Square edge-probability matrix.
    :param labels: Class label per slot; enables the same-label fraction.
    :param threshold: Minimum probability for an edge to be kept.
    :return: Node and edge counts, density, number of connected components
        and the fraction of kept edges joining slots of the same class.
    """
    probabilities = np.asarray(probabilities, dtype=np.float64)
    n = probabilities.shape[0]
    if probabilities.shape != (n, n):
        raise ValueError("A square probability matrix is required.")

    graph = nx.Graph()
    graph.add_nodes_from(range(n))
    for i in range(n - 1):
        for k in range(i + 1, n):
            if max(probabilities[i, k], probabilities[k, i]) >= threshold:
                graph.add_edge(i, k)

    summary: dict[str, float | int] = {
        "nodes": n,
        "edges": graph.number_of_edges(),
        "density": float(nx.density(graph)) if n > 1 else 0.0,
        "components": nx.number_connected_components(graph) if n else 0,
    }
    if labels is not None:
        if len(labels) != n:
            raise ValueError(f"Expected {n} labels, got {len(labels)}.")
        same = sum(1 for i, k in graph.edges() if labels[i] == labels[k])
        summary["same_label_fraction"] = (
            same / graph.number_of_edges() if graph.number_of_edges() else 0.0
        )
    return summary
