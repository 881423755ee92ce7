"""
Flat binary checkpoint container for named float64 arrays.

Layout (all integers little-endian)::

    magic    8 bytes  b"RELMEM01"
    version  u32
    records until end of file:
        name_len  u32
        name      name_len bytes, UTF-8
        rank      u32
        dims      rank * u64
        values    prod(dims) * f64
"""

from __future__ import annotations

import math
import struct
from collections.abc import Mapping
from pathlib import Path

import numpy as np

from ..tensors import Tensor

CHECKPOINT_MAGIC = b"RELMEM01"
CHECKPOINT_VERSION = 1


class CheckpointError(ValueError):
    """
    Raised for unreadable checkpoint files (bad magic, version or truncation).
    """


def encode_checkpoint(tensors: Mapping[str, np.ndarray | Tensor]) -> bytes:
    """
    Serialize named arrays into the checkpoint container.
    """
    chunks = [CHECKPOINT_MAGIC, struct.pack("<I", CHECKPOINT_VERSION)]
    for name, array in tensors.items():
        values = array.values if isinstance(array, Tensor) else np.asarray(array)
        values = np.asarray(values, dtype="<f8", order="C")
        encoded = name.encode("utf-8")
        chunks.append(struct.pack("<I", len(encoded)))
        chunks.append(encoded)
        chunks.append(struct.pack("<I", values.ndim))
        chunks.append(struct.pack(f"<{values.ndim}Q", *values.shape))
        chunks.append(values.tobytes())
    return b"".join(chunks)


def decode_checkpoint(data: bytes) -> dict[str, np.ndarray]:
    """
    Parse a checkpoint container into named float64 arrays.

    :raise CheckpointError: If the magic, the version or the record structure is invalid.
    """
    if len(data) < 12 or data[:8] != CHECKPOINT_MAGIC:
        raise CheckpointError("Not a relmem checkpoint (bad magic).")
    (version,) = struct.unpack_from("<I", data, 8)
    if version != CHECKPOINT_VERSION:
        raise CheckpointError(f"Unsupported checkpoint version {version}.")

    offset = 12
    tensors: dict[str, np.ndarray] = {}

    def take(nbytes: int) -> int:
        nonlocal offset
        if offset + nbytes > len(data):
            raise CheckpointError("Truncated checkpoint.")
        start = offset
        offset += nbytes
        return start

    while offset < len(data):
        (name_len,) = struct.unpack_from("<I", data, take(4))
        start = take(name_len)
        try:
            name = data[start : start + name_len].decode("utf-8")
        except UnicodeDecodeError as e:
            raise CheckpointError("Invalid tensor name.") from e
        (rank,) = struct.unpack_from("<I", data, take(4))
        dims = struct.unpack_from(f"<{rank}Q", data, take(8 * rank))
        count = math.prod(dims)
        if 8 * count > len(data) - offset:
            raise CheckpointError(
                f"Record {name!r} claims dims {dims} beyond the end of the checkpoint."
            )
        start = take(8 * count)
        if count == 0:
            tensors[name] = np.zeros(dims, dtype=np.float64)
            continue
        values = np.frombuffer(data, dtype="<f8", count=count, offset=start)
        tensors[name] = values.astype(np.float64).reshape(dims)
    return tensors


def save_checkpoint(path: str | Path, tensors: Mapping[str, np.ndarray | Tensor]) -> Path:
    """
    Write named arrays to a checkpoint file.
    """
    path = Path(path)
    path.write_bytes(encode_checkpoint(tensors))
    return path


def load_checkpoint(path: str | Path) -> dict[str, np.ndarray]:
    """
    Read a checkpoint file.

    :raise FileNotFoundError: If the file does not exist.
    :raise CheckpointError: If the file is not a valid checkpoint.
    """
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"Checkpoint not found: {path}")
    return decode_checkpoint(path.read_bytes())
