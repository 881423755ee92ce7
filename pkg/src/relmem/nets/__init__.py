"""
Parameter containers and forward passes of the encoder and classifier stacks.
"""

from .checkpoint import (
    CheckpointError,
    decode_checkpoint,
    encode_checkpoint,
    load_checkpoint,
    save_checkpoint,
)
from .layers import Linear, init_linear
from .stacks import (
    ArchConfig,
    ClassifierStack,
    EncoderStack,
    init_classifier,
    init_params,
    one_hot,
)

__all__ = [
    "ArchConfig",
    "CheckpointError",
    "ClassifierStack",
    "EncoderStack",
    "Linear",
    "decode_checkpoint",
    "encode_checkpoint",
    "init_classifier",
    "init_linear",
    "init_params",
    "load_checkpoint",
    "one_hot",
    "save_checkpoint",
]
