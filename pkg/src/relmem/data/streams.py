"""
Synthetic task streams built from Gaussian blobs on a square feature grid.

Three families are supported:

- split: task t holds a disjoint subset of consecutive classes,
- permuted: every task holds all classes with a fixed feature permutation,
- rotated: every task holds all classes with the grid rotated by a fixed angle.

Labels are global class ids (single output head). Features are rescaled
affinely and clipped to [0, 1], stored as float32.
"""

from __future__ import annotations

from collections.abc import Sequence
from enum import Enum

import numpy as np


class Family(str, Enum):
    SPLIT = "split"
    PERMUTED = "permuted"
    ROTATED = "rotated"

    @property
    def code(self) -> int:
        return list(Family).index(self)

    @classmethod
    def from_code(cls, code: int) -> Family:
        members = list(cls)
        if not 0 <= code < len(members):
            raise ValueError(f"Unknown task family code {code}.")
        return members[code]


class BlobSpec:
    """
    Parameters of the class-conditional Gaussian blobs.
    """

    def __init__(
        self,
        num_classes: int = 10,
        grid: int = 8,
        radius: float = 2.5,
        sigma: float = 0.6,
        train_per_class: int = 500,
        test_per_class: int = 50,
    ):
        if num_classes < 2:
            raise ValueError("At least two classes are required.")
        if grid < 1:
            raise ValueError("Grid side must be positive.")
        if radius <= 0:
            raise ValueError("Radius must be positive.")
        if sigma <= 0:
            raise ValueError("Noise level sigma must be positive.")
        if train_per_class < 1 or test_per_class < 1:
            raise ValueError("Every class needs at least one train and one test sample.")
        self.num_classes = int(num_classes)
        self.grid = int(grid)
        self.radius = float(radius)
        self.sigma = float(sigma)
        self.train_per_class = int(train_per_class)
        self.test_per_class = int(test_per_class)

    def __repr__(self) -> str:
        return (
            f"BlobSpec(num_classes={self.num_classes}, grid={self.grid}, "
            + f"radius={self.radius}, sigma={self.sigma}, "
            + f"train_per_class={self.train_per_class}, "
            + f"test_per_class={self.test_per_class})"
        )

    @property
    def input_dim(self) -> int:
        return self.grid * self.grid


class Task:
    """
    One task: its class subset, an ordered training set and a test set.
    """

    def __init__(
        self,
        class_ids: Sequence[int] | np.ndarray,
        train_x: np.ndarray,
        train_y: np.ndarray,
        test_x: np.ndarray,
        test_y: np.ndarray,
    ):
        self.class_ids = np.asarray(class_ids, dtype=np.uint32)
        self.train_x = np.asarray(train_x, dtype=np.float32)
        self.train_y = np.asarray(train_y, dtype=np.uint32)
        self.test_x = np.asarray(test_x, dtype=np.float32)
        self.test_y = np.asarray(test_y, dtype=np.uint32)
        if self.train_x.shape[0] != self.train_y.shape[0]:
            raise ValueError("Training features and labels differ in length.")
        if self.test_x.shape[0] != self.test_y.shape[0]:
            raise ValueError("Test features and labels differ in length.")

    def __repr__(self) -> str:
        return (
            f"Task(classes={self.class_ids.tolist()}, "
            + f"n_train={self.n_train}, n_test={self.n_test})"
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Task):
            return NotImplemented
        return all(
            np.array_equal(a, b)
            for a, b in (
                (self.class_ids, other.class_ids),
                (self.train_x, other.train_x),
                (self.train_y, other.train_y),
                (self.test_x, other.test_x),
                (self.test_y, other.test_y),
            )
        )

    @property
    def n_train(self) -> int:
        return int(self.train_x.shape[0])

    @property
    def n_test(self) -> int:
        return int(self.test_x.shape[0])

    def batches(
        self, batch_size: int, rng: np.random.Generator | None = None
    ) -> list[tuple[np.ndarray, np.ndarray]]:
        """
        Split the training set into consecutive batches; the last one may be smaller.

        :param batch_size: Number of examples per batch.
        :param rng: If given, the training order is shuffled first.
        """
        if batch_size < 1:
            raise ValueError("Batch size must be positive.")
        order = np.arange(self.n_train)
        if rng is not None:
            order = rng.permutation(self.n_train)
        return [
            (self.train_x[order[i : i + batch_size]], self.train_y[order[i : i + batch_size]])
            for i in range(0, self.n_train, batch_size)
        ]


class TaskStream:
    """
    Ordered sequence of tasks delivered once each.
    """

    def __init__(
        self,
        tasks: list[Task],
        num_classes: int,
        input_dim: int,
        family: Family | str,
        batch_size: int = 10,
    ):
        self.tasks = tasks
        self.num_classes = int(num_classes)
        self.input_dim = int(input_dim)
        self.family = Family(family)
        self.batch_size = int(batch_size)

    def __repr__(self) -> str:
        return (
            f"TaskStream(family={self.family.value}, tasks={len(self.tasks)}, "
            + f"num_classes={self.num_classes}, input_dim={self.input_dim}, "
            + f"batch_size={self.batch_size})"
        )

    def __len__(self) -> int:
        return len(self.tasks)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TaskStream):
            return NotImplemented
        return (
            self.family == other.family
            and self.num_classes == other.num_classes
            and self.input_dim == other.input_dim
            and self.batch_size == other.batch_size
            and self.tasks == other.tasks
        )


def _rescale(x: np.ndarray) -> np.ndarray:
    return np.clip(0.5 + x / 6.0, 0.0, 1.0).astype(np.float32)


def _class_means(spec: BlobSpec, rng: np.random.Generator) -> np.ndarray:
    directions = rng.normal(size=(spec.num_classes, spec.input_dim))
    return spec.radius * directions / np.linalg.norm(directions, axis=1, keepdims=True)


def _draw(
    means: np.ndarray,
    classes: Sequence[int],
    per_class: int,
    sigma: float,
    rng: np.random.Generator,
    shuffle: bool,
) -> tuple[np.ndarray, np.ndarray]:
    labels = np.repeat(np.asarray(classes, dtype=np.int64), per_class)
    x = means[labels] + sigma * rng.normal(size=(labels.shape[0], means.shape[1]))
    if shuffle:
        order = rng.permutation(labels.shape[0])
        x, labels = x[order], labels[order]
    return _rescale(x), labels.astype(np.uint32)


def gen_split_blobs(
    spec: BlobSpec,
    num_tasks: int,
    classes_per_task: int,
    seed: int,
    batch_size: int = 10,
) -> TaskStream:
    """
    Task t covers classes [t * classes_per_task, (t + 1) * classes_per_task).

    :raise ValueError: If the tasks need more classes than the blob specification provides.
    """
    if num_tasks < 1 or classes_per_task < 1:
        raise ValueError("Number of tasks and classes per task must be positive.")
    if num_tasks * classes_per_task > spec.num_classes:
        raise ValueError(
            f"{num_tasks} tasks with {classes_per_task} classes each exceed "
            + f"the class budget of {spec.num_classes}."
        )
    rng = np.random.default_rng(seed)
    means = _class_means(spec, rng)
    tasks = []
    for t in range(num_tasks):
        classes = list(range(t * classes_per_task, (t + 1) * classes_per_task))
        train_x, train_y = _draw(means, classes, spec.train_per_class, spec.sigma, rng, True)
        test_x, test_y = _draw(means, classes, spec.test_per_class, spec.sigma, rng, False)
        tasks.append(Task(classes, train_x, train_y, test_x, test_y))
    return TaskStream(tasks, spec.num_classes, spec.input_dim, Family.SPLIT, batch_size)


def _base_dataset(
    spec: BlobSpec, rng: np.random.Generator
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    means = _class_means(spec, rng)
    classes = list(range(spec.num_classes))
    train_x, train_y = _draw(means, classes, spec.train_per_class, spec.sigma, rng, True)
    test_x, test_y = _draw(means, classes, spec.test_per_class, spec.sigma, rng, False)
    return train_x, train_y, test_x, test_y


def gen_permuted(spec: BlobSpec, num_tasks: int, seed: int, batch_size: int = 10) -> TaskStream:
    """
    Task t permutes the feature indices of a fixed base dataset by pi_t, pi_0 = identity.
    """
    if num_tasks < 1:
        raise ValueError("At least one task is required.")
    rng = np.random.default_rng(seed)
    train_x, train_y, test_x, test_y = _base_dataset(spec, rng)
    classes = np.arange(spec.num_classes)
    tasks = []
    for t in range(num_tasks):
        perm = np.arange(spec.input_dim) if t == 0 else rng.permutation(spec.input_dim)
        tasks.append(Task(classes, train_x[:, perm], train_y, test_x[:, perm], test_y))
    return TaskStream(tasks, spec.num_classes, spec.input_dim, Family.PERMUTED, batch_size)


def rotate_grid(features: np.ndarray, grid: int, degrees: float) -> np.ndarray:
    """
    Rotate every row, read as a grid x grid image, about the grid center.

    Nearest-neighbour resampling; pixels mapped from outside the frame are 0.

    :raise ValueError: If the feature count is not grid * grid.
    """
    features = np.asarray(features)
    if features.ndim != 2 or features.shape[1] != grid * grid:
        raise ValueError(
            f"Features of shape {features.shape} cannot be read as {grid}x{grid} grids."
        )
    theta = np.deg2rad(degrees)
    center = (grid - 1) / 2.0
    rows, cols = np.meshgrid(np.arange(grid), np.arange(grid), indexing="ij")
    dy, dx = rows - center, cols - center
    src_col = np.rint(np.cos(theta) * dx + np.sin(theta) * dy + center).astype(np.int64)
    src_row = np.rint(-np.sin(theta) * dx + np.cos(theta) * dy + center).astype(np.int64)
    inside = (src_row >= 0) & (src_row < grid) & (src_col >= 0) & (src_col < grid)

    images = features.reshape(-1, grid, grid)
    out = np.zeros_like(images)
    out[:, inside] = images[:, src_row[inside], src_col[inside]]
    return out.reshape(features.shape)


def gen_rotated(
    spec: BlobSpec,
    num_tasks: int,
    max_degrees: float,
    seed: int,
    batch_size: int = 10,
) -> TaskStream:
    """
    Task t rotates a fixed base dataset by theta_t ~ U[0, max_degrees], theta_0 = 0.
    """
    if num_tasks < 1:
        raise ValueError("At least one task is required.")
    rng = np.random.default_rng(seed)
    train_x, train_y, test_x, test_y = _base_dataset(spec, rng)
    classes = np.arange(spec.num_classes)
    tasks = []
    for t in range(num_tasks):
        theta = 0.0 if t == 0 else float(rng.uniform(0.0, max_degrees))
        tasks.append(
            Task(
                classes,
                rotate_grid(train_x, spec.grid, theta),
                train_y,
                rotate_grid(test_x, spec.grid, theta),
                test_y,
            )
        )
    return TaskStream(tasks, spec.num_classes, spec.input_dim, Family.ROTATED, batch_size)


def generate_stream(
    family: Family | str,
    spec: BlobSpec,
    num_tasks: int,
    seed: int,
    classes_per_task: int = 2,
    max_degrees: float = 180.0,
    batch_size: int = 10,
) -> TaskStream:
    """
    Dispatch to the generator of the given family.
    """
    family = Family(family)
    if family == Family.SPLIT:
        return gen_split_blobs(spec, num_tasks, classes_per_task, seed, batch_size)
    if family == Family.PERMUTED:
        return gen_permuted(spec, num_tasks, seed, batch_size)
    return gen_rotated(spec, num_tasks, max_degrees, seed, batch_size)
