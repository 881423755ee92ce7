"""
This module contains the classes and functions for all configuration-related tasks.
"""

from .config import (
    ConfigManager,
    DataConfig,
    GeneralConfig,
    ModelConfig,
    TrainConfig,
)
from .seeding import Stream, stream_rng, stream_seed

__all__ = [
    "ConfigManager",
    "DataConfig",
    "GeneralConfig",
    "ModelConfig",
    "Stream",
    "TrainConfig",
    "stream_rng",
    "stream_seed",
]
