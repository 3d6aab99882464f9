"""
Seeded random streams.

Every stream is a Philox counter-based generator keyed by (seed, task id)
through numpy's SeedSequence, so streams for different tasks are independent
and do not depend on scheduling.
"""
from typing import Sequence, Union

import numpy as np

SeedLike = Union[int, np.random.Generator]


def rng_stream(seed: int, *task_id: int) -> np.random.Generator:
    """
    Generator for the stream (seed, task_id...).

    Args:
        seed: Experiment seed (non-negative)
        task_id: Stream path, e.g. (surface_index,) or (surface_index, observable_index)
    """
    if seed < 0:
        raise ValueError(f"Seed must be non-negative, got {seed}")
    sequence = np.random.SeedSequence(entropy=seed, spawn_key=tuple(int(t) for t in task_id))
    return np.random.Generator(np.random.Philox(sequence))


def as_generator(seed: SeedLike) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return rng_stream(int(seed))


def split_counts(total: int, weights: Sequence[float]) -> np.ndarray:
    """Largest-remainder allocation of ``total`` samples proportional to ``weights``."""
    w = np.asarray(weights, dtype=float)
    share = total * w / w.sum()
    counts = np.floor(share).astype(int)
    missing = total - counts.sum()
    if missing > 0:
        order = np.argsort(-(share - counts), kind="stable")
        counts[order[:missing]] += 1
    return counts
