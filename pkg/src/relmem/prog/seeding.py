"""
Derivation of independent random streams from one run seed.

The seed of stream `s` for run seed `n` is the first 32-bit word of
`numpy.random.SeedSequence([n, s])`. Changing how many draws one
component consumes (e.g. the number of test-time samples) therefore
never perturbs another component.
"""

from __future__ import annotations

from enum import IntEnum

import numpy as np


class Stream(IntEnum):
    DATA = 0
    INIT = 1
    TRAIN = 2
    SAMPLER = 3
    EVAL = 4


def stream_seed(seed: int, stream: Stream | int) -> int:
    if seed < 0:
        raise ValueError("Seeds should be non-negative.")
    return int(np.random.SeedSequence([seed, int(stream)]).generate_state(1)[0])


def stream_rng(seed: int, stream: Stream | int) -> np.random.Generator:
    return np.random.default_rng(stream_seed(seed, stream))
