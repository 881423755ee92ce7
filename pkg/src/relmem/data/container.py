"""
Binary dataset container.

Layout (all integers little-endian)::

    magic        8 bytes  b"RELDS001"
    version      u32
    family       u32      0 split, 1 permuted, 2 rotated
    num_classes  u64
    input_dim    u64
    num_tasks    u64
    batch_size   u64
    per task:
        n_train      u64
        n_test       u64
        k            u64      number of class ids
        class_ids    k * u32
        train_x      n_train * input_dim * f32
        train_y      n_train * u32
        test_x       n_test * input_dim * f32
        test_y       n_test * u32
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

from .streams import Family, Task, TaskStream

DATASET_MAGIC = b"RELDS001"
DATASET_VERSION = 1
_HEADER = struct.Struct("<8sII4Q")
_TASK_HEADER = struct.Struct("<3Q")


class ContainerError(ValueError):
    """
    Raised for invalid dataset containers (bad magic, version or truncation).
    """


def encode_dataset(stream: TaskStream) -> bytes:
    chunks = [
        _HEADER.pack(
            DATASET_MAGIC,
            DATASET_VERSION,
            stream.family.code,
            stream.num_classes,
            stream.input_dim,
            len(stream.tasks),
            stream.batch_size,
        )
    ]
    for task in stream.tasks:
        chunks.append(_TASK_HEADER.pack(task.n_train, task.n_test, task.class_ids.shape[0]))
        chunks.append(task.class_ids.astype("<u4").tobytes())
        chunks.append(task.train_x.astype("<f4").tobytes())
        chunks.append(task.train_y.astype("<u4").tobytes())
        chunks.append(task.test_x.astype("<f4").tobytes())
        chunks.append(task.test_y.astype("<u4").tobytes())
    return b"".join(chunks)


class _Reader:
    def __init__(self, data: bytes):
        self.data = data
        self.offset = 0

    def take(self, nbytes: int) -> int:
        if self.offset + nbytes > len(self.data):
            raise ContainerError("Truncated dataset container.")
        start = self.offset
        self.offset += nbytes
        return start

    def array(self, dtype: str, count: int) -> np.ndarray:
        itemsize = np.dtype(dtype).itemsize
        start = self.take(itemsize * count)
        return np.frombuffer(self.data, dtype=dtype, count=count, offset=start).copy()


def decode_dataset(data: bytes) -> TaskStream:
    """
    :raise ContainerError: If the container is malformed.
    """
    reader = _Reader(data)
    magic, version, family_code, num_classes, input_dim, num_tasks, batch_size = (
        _HEADER.unpack_from(data, reader.take(_HEADER.size))
    )
    if magic != DATASET_MAGIC:
        raise ContainerError("Not a relmem dataset container (bad magic).")
    if version != DATASET_VERSION:
        raise ContainerError(f"Unsupported dataset container version {version}.")
    try:
        family = Family.from_code(family_code)
    except ValueError as e:
        raise ContainerError(str(e)) from e

    tasks = []
    for _ in range(num_tasks):
        n_train, n_test, k = _TASK_HEADER.unpack_from(data, reader.take(_TASK_HEADER.size))
        class_ids = reader.array("<u4", k)
        train_x = reader.array("<f4", n_train * input_dim).reshape(n_train, input_dim)
        train_y = reader.array("<u4", n_train)
        test_x = reader.array("<f4", n_test * input_dim).reshape(n_test, input_dim)
        test_y = reader.array("<u4", n_test)
        tasks.append(Task(class_ids, train_x, train_y, test_x, test_y))
    if reader.offset != len(data):
        raise ContainerError("Trailing bytes after the last task.")
    return TaskStream(tasks, num_classes, input_dim, family, batch_size)


def save_dataset(stream: TaskStream, path: str | Path) -> Path:
    path = Path(path)
    path.write_bytes(encode_dataset(stream))
    return path


def load_dataset(path: str | Path) -> TaskStream:
    """
    Read a dataset container written by `save_dataset`.

    :raise FileNotFoundError: If the file does not exist.
    :raise ContainerError: If the file is not a valid container.
    """
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"Dataset container not found: {path}")
    return decode_dataset(path.read_bytes())
