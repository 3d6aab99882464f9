"""
Zorich-accelerated Rauzy paths with their matrices, heights and Teichmuller times.
"""
import logging
import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy as np

from iet.induction import ZorichMove, zorich_move
from iet.permutation import Permutation
from iet.transformation import IET, normalize
from surface.zippered import heights_from_suspension

logger = logging.getLogger(__name__)


@dataclass
class CocyclePath:
    """
    A path of n Zorich steps.

    ``lengths[i]`` and ``heights[i]`` are the data after i steps, rescaled to
    unit total length and (correspondingly) by exp(-t_i) in height, so the area
    stays constant. Actual heights are ``heights[i] * exp(times[i])``.
    """
    permutation: Permutation
    moves: List[ZorichMove] = field(default_factory=list)
    lengths: List[np.ndarray] = field(default_factory=list)
    heights: List[np.ndarray] = field(default_factory=list)
    times: List[float] = field(default_factory=lambda: [0.0])

    @property
    def n_steps(self) -> int:
        return len(self.moves)

    @property
    def matrices(self) -> List[np.ndarray]:
        return [m.matrix() for m in self.moves]

    @property
    def teichmuller_times(self) -> List[float]:
        """t_1..t_n."""
        return self.times[1:]

    def actual_heights(self, i: int) -> np.ndarray:
        return self.heights[i] * math.exp(self.times[i])

    def permutations(self) -> List[Permutation]:
        return [self.permutation] + [m.permutation_after for m in self.moves]


def default_heights(p: Permutation, lengths: np.ndarray) -> np.ndarray:
    """Canonical-suspension heights scaled to unit area over the given lengths."""
    h = heights_from_suspension(p, p.canonical_suspension())
    return h / float(np.dot(lengths, h))


def build_path(p: Permutation, lengths: Sequence[float], n_zorich: int,
               heights: Optional[Sequence[float]] = None) -> CocyclePath:
    """
    Run n_zorich Zorich steps from (p, lengths).

    Args:
        p: Irreducible permutation
        lengths: Keane-generic lengths (rescaled to total length 1)
        n_zorich: Number of accelerated steps
        heights: Starting heights (canonical suspension when omitted)

    Returns:
        CocyclePath with heights' = B^T heights at every step

    Raises:
        ConnectionDetected: If the lengths hit a saddle connection
    """
    iet = normalize(IET(p, tuple(lengths), log_scale=0.0))
    h = default_heights(p, iet.array) if heights is None else np.asarray(heights, dtype=float) * math.exp(-iet.log_scale)
    path = CocyclePath(permutation=p, lengths=[iet.array], heights=[h])
    start = iet.log_scale
    for step in range(n_zorich):
        induced, move = zorich_move(iet)
        shrink = induced.total_length / iet.total_length
        iet = normalize(induced)
        h = (move.matrix().T @ h) * shrink
        path.moves.append(move)
        path.lengths.append(iet.array)
        path.heights.append(h)
        path.times.append(iet.log_scale - start)
        if step and step % 1000 == 0:
            logger.debug(f"Path step {step}: t = {path.times[-1]:.2f}")
    return path
