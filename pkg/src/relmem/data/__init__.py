"""
Synthetic task streams and the dataset container.
"""

from .container import (
    ContainerError,
    decode_dataset,
    encode_dataset,
    load_dataset,
    save_dataset,
)
from .streams import (
    BlobSpec,
    Family,
    Task,
    TaskStream,
    gen_permuted,
    gen_rotated,
    gen_split_blobs,
    generate_stream,
    rotate_grid,
)

__all__ = [
    "BlobSpec",
    "ContainerError",
    "Family",
    "Task",
    "TaskStream",
    "decode_dataset",
    "encode_dataset",
    "gen_permuted",
    "gen_rotated",
    "gen_split_blobs",
    "generate_stream",
    "load_dataset",
    "rotate_grid",
    "save_dataset",
]
