"""
Encoder and classifier stacks.

The GCL model consists of a shared MLP trunk with two heads, one mapping
into the kernel space (image embeddings u) and one into the latent space
(image part of v), a linear label encoder, and a classifier that applies
a ReLU followed by one linear map. The baselines use the same trunk with a
single linear classification head.
"""

from __future__ import annotations

from collections.abc import Sequence

import numpy as np

from ..tensors import Tensor, concat_cols, relu
from .layers import Linear, init_linear


class ArchConfig:
    """
    Dimensions of the encoder and classifier stacks.
    """

    def __init__(
        self,
        input_dim: int,
        num_classes: int,
        trunk_widths: Sequence[int] = (64, 64),
        d1: int = 32,
        d_img: int = 32,
        d_lab: int = 16,
    ):
        """
        :param input_dim: Number of input features.
        :param num_classes: Size of the class universe (single output head).
        :param trunk_widths: Widths of the hidden ReLU layers of the trunk.
        :param d1: Dimension of the kernel-space embeddings.
        :param d_img: Dimension of the image part of the latent representation.
        :param d_lab: Dimension of the label part of the latent representation.
        :raise TypeError: If a dimension is not an integer.
        :raise ValueError: If a dimension is not positive or num_classes < 2.
        """
        for name, value in (
            ("input_dim", input_dim),
            ("d1", d1),
            ("d_img", d_img),
            ("d_lab", d_lab),
            ("num_classes", num_classes),
            *((f"trunk_widths[{i}]", w) for i, w in enumerate(trunk_widths)),
        ):
            if not isinstance(value, (int, np.integer)) or isinstance(value, bool):
                raise TypeError(f"Integer expected for {name}.")
            if value < 1:
                raise ValueError(f"{name} must be positive.")
        if num_classes < 2:
            raise ValueError("At least two classes are required.")
        self._input_dim = int(input_dim)
        self._num_classes = int(num_classes)
        self._trunk_widths = tuple(int(w) for w in trunk_widths)
        self._d1 = int(d1)
        self._d_img = int(d_img)
        self._d_lab = int(d_lab)

    def __repr__(self) -> str:
        return (
            f"ArchConfig(input_dim={self._input_dim}, "
            + f"num_classes={self._num_classes}, "
            + f"trunk_widths={list(self._trunk_widths)}, "
            + f"d1={self._d1}, d_img={self._d_img}, d_lab={self._d_lab})"
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ArchConfig):
            return NotImplemented
        return repr(self) == repr(other)

    @property
    def input_dim(self) -> int:
        return self._input_dim

    @property
    def num_classes(self) -> int:
        return self._num_classes

    @property
    def trunk_widths(self) -> tuple[int, ...]:
        return self._trunk_widths

    @property
    def d1(self) -> int:
        return self._d1

    @property
    def d_img(self) -> int:
        return self._d_img

    @property
    def d_lab(self) -> int:
        return self._d_lab

    @property
    def d2(self) -> int:
        """
        Width of the latent representation consumed by propagation and the classifier.
        """
        return self._d_img + self._d_lab

    @property
    def trunk_dim(self) -> int:
        """
        Output width of the trunk (the input width if the trunk is empty).
        """
        return self._trunk_widths[-1] if self._trunk_widths else self._input_dim


def one_hot(labels: np.ndarray | Sequence[int], num_classes: int) -> np.ndarray:
    """
    Encode integer labels as float64 one-hot rows.
    """
    labels = np.asarray(labels, dtype=np.int64)
    if labels.size and (labels.min() < 0 or labels.max() >= num_classes):
        raise ValueError(f"Labels must lie in [0, {num_classes}).")
    out = np.zeros((labels.shape[0], num_classes))
    out[np.arange(labels.shape[0]), labels] = 1.0
    return out


class _TrunkMixin:
    trunk: list[Linear]

    def run_trunk(self, x: Tensor) -> Tensor:
        h = x
        for layer in self.trunk:
            h = relu(layer(h))
        return h

    def _trunk_parameters(self) -> dict[str, Tensor]:
        params: dict[str, Tensor] = {}
        for i, layer in enumerate(self.trunk):
            params.update(layer.parameters(f"trunk.{i}"))
        return params


def _build_trunk(rng: np.random.Generator, config: ArchConfig) -> list[Linear]:
    widths = (config.input_dim, *config.trunk_widths)
    return [init_linear(rng, widths[i], widths[i + 1]) for i in range(len(widths) - 1)]


class _StateMixin:
    def parameters(self) -> dict[str, Tensor]:
        raise NotImplementedError

    def num_parameters(self) -> int:
        """
        Total number of scalar parameters.
        """
        return sum(p.size for p in self.parameters().values())

    def zero_grad(self) -> None:
        for p in self.parameters().values():
            p.zero_grad()

    def state_dict(self) -> dict[str, np.ndarray]:
        """
        Copy all parameter values, keyed by parameter name.
        """
        return {name: p.values.copy() for name, p in self.parameters().items()}

    def load_state_dict(self, state: dict[str, np.ndarray]) -> None:
        """
        Overwrite the parameter values in place.

        :raise KeyError: If a parameter is missing from the state.
        :raise ValueError: If a shape does not match.
        """
        params = self.parameters()
        missing = set(params) - set(state)
        if missing:
            raise KeyError(f"Missing parameters in state: {sorted(missing)}")
        for name, p in params.items():
            values = np.asarray(state[name], dtype=np.float64)
            if values.shape != p.shape:
                raise ValueError(
                    f"Shape mismatch for '{name}': expected {p.shape}, got {values.shape}."
                )
            p.values[...] = values


class EncoderStack(_TrunkMixin, _StateMixin):
    """
    Shared trunk with graph and latent heads, label encoder and classifier.
    """

    def __init__(
        self,
        config: ArchConfig,
        trunk: list[Linear],
        head_graph: Linear,
        head_latent: Linear,
        label_embed: Linear,
        classifier: Linear,
    ):
        self.config = config
        self.trunk = trunk
        self.head_graph = head_graph
        self.head_latent = head_latent
        self.label_embed = label_embed
        self.classifier = classifier

    def encode_graph(self, x: Tensor) -> Tensor:
        """
        Kernel-space embeddings U (batch x d1).
        """
        return self.head_graph(self.run_trunk(x))

    def encode_latent(self, x: Tensor, y_onehot: Tensor) -> Tensor:
        """
        Latent representations V = [head_latent(trunk(x)) | label_embed(y)] (batch x d2).
        """
        return concat_cols(self.head_latent(self.run_trunk(x)), self.label_embed(y_onehot))

    def classify(self, z: Tensor) -> Tensor:
        """
        Logits of linear(relu(z)).
        """
        return self.classifier(relu(z))

    def parameters(self) -> dict[str, Tensor]:
        params = self._trunk_parameters()
        params.update(self.head_graph.parameters("head_graph"))
        params.update(self.head_latent.parameters("head_latent"))
        params.update(self.label_embed.parameters("label_embed"))
        params.update(self.classifier.parameters("classifier"))
        return params


class ClassifierStack(_TrunkMixin, _StateMixin):
    """
    Trunk plus one linear head, used by the replay and finetune baselines.
    """

    def __init__(self, config: ArchConfig, trunk: list[Linear], head: Linear):
        self.config = config
        self.trunk = trunk
        self.head = head

    def logits(self, x: Tensor) -> Tensor:
        return self.head(self.run_trunk(x))

    def parameters(self) -> dict[str, Tensor]:
        params = self._trunk_parameters()
        params.update(self.head.parameters("head"))
        return params


def init_params(config: ArchConfig, seed: int) -> EncoderStack:
    """
    Initialize an encoder stack deterministically from a seed.

    Layers are drawn in the order trunk, head_graph, head_latent,
    label_embed, classifier.
    """
    rng = np.random.default_rng(seed)
    trunk = _build_trunk(rng, config)
    head_graph = init_linear(rng, config.trunk_dim, config.d1)
    head_latent = init_linear(rng, config.trunk_dim, config.d_img)
    label_embed = init_linear(rng, config.num_classes, config.d_lab)
    classifier = init_linear(rng, config.d2, config.num_classes)
    return EncoderStack(config, trunk, head_graph, head_latent, label_embed, classifier)


def init_classifier(config: ArchConfig, seed: int) -> ClassifierStack:
    """
    Initialize a baseline classifier stack deterministically from a seed.
    """
    rng = np.random.default_rng(seed)
    trunk = _build_trunk(rng, config)
    head = init_linear(rng, config.trunk_dim, config.num_classes)
    return ClassifierStack(config, trunk, head)
