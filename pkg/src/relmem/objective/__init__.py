"""
Training objective of the graph-based model.
"""

from .losses import LossWeights, edge_bce, graph_regularization, total_loss

__all__ = ["LossWeights", "edge_bce", "graph_regularization", "total_loss"]
