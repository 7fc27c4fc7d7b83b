"""Seeded random streams.

Every stochastic routine takes an explicit integer seed. Work split across
``w`` workers draws worker ``i``'s samples from ``stream(seed, i)``, which is
``numpy.random.default_rng([seed, i])`` (PCG64 seeded through SeedSequence).
Results are reproducible for a fixed (seed, worker count) pair; changing the
worker count changes the partition of the stream and hence the exact numbers.
"""

from __future__ import annotations

import numpy as np

DEFAULT_SEED = 20211017


def stream(seed: int, worker: int = 0) -> np.random.Generator:
    if seed < 0 or worker < 0:
        raise ValueError("seed and worker index must be nonnegative")
    if worker == 0:
        return np.random.default_rng(seed)
    return np.random.default_rng([seed, worker])


def split(total: int, workers: int) -> list[int]:
    """Sample counts per worker, as even as possible."""
    if workers < 1:
        raise ValueError("workers must be >= 1")
    base, extra = divmod(total, workers)
    return [base + (1 if i < extra else 0) for i in range(workers)]
