"""
Interval exchange transformations on [0, total_length).
"""
import json
import math
from bisect import bisect_right
from dataclasses import dataclass
from typing import Any, Dict, List, Sequence, Tuple

import numpy as np

from iet.errors import DiscontinuityHit
from iet.permutation import Permutation

TIE_TOLERANCE = 1e-12  # relative to total_length


@dataclass(frozen=True)
class IET:
    """
    Lengths plus permutation.

    Top intervals are laid out left to right in top order; a point of the top
    interval of letter a is translated onto the bottom interval of a.
    ``log_scale`` accumulates -log of every rescaling applied by ``normalize``.
    """
    permutation: Permutation
    lengths: Tuple[float, ...]
    log_scale: float = 0.0

    def __post_init__(self):
        lengths = tuple(float(v) for v in self.lengths)
        if len(lengths) != self.permutation.d:
            raise ValueError(f"Expected {self.permutation.d} lengths, got {len(lengths)}")
        for v in lengths:
            if not math.isfinite(v) or v <= 0:
                raise ValueError(f"Lengths must be positive and finite, got {lengths}")
        object.__setattr__(self, "lengths", lengths)

    @property
    def d(self) -> int:
        return self.permutation.d

    @property
    def total_length(self) -> float:
        return math.fsum(self.lengths)

    @property
    def array(self) -> np.ndarray:
        return np.array(self.lengths)

    def top_starts(self) -> List[float]:
        """Left endpoint of each letter's top interval, indexed by letter."""
        starts = [0.0] * self.d
        acc = 0.0
        for letter in self.permutation.top:
            starts[letter] = acc
            acc += self.lengths[letter]
        return starts

    def bottom_starts(self) -> List[float]:
        starts = [0.0] * self.d
        acc = 0.0
        for letter in self.permutation.bottom:
            starts[letter] = acc
            acc += self.lengths[letter]
        return starts

    def top_breakpoints(self) -> List[float]:
        """Interior discontinuities, in increasing order."""
        acc, points = 0.0, []
        for letter in self.permutation.top[:-1]:
            acc += self.lengths[letter]
            points.append(acc)
        return points

    def locate(self, x: float) -> int:
        """Letter whose top interval contains x."""
        k = bisect_right(self.top_breakpoints(), x)
        return self.permutation.top[min(k, self.d - 1)]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "permutation": self.permutation.to_text(),
            "lengths": list(self.lengths),
            "log_scale": self.log_scale,
        }

    def to_json(self) -> str:
        # floats are written with repr and round-trip exactly
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "IET":
        return cls(
            permutation=Permutation.from_text(data["permutation"]),
            lengths=tuple(data["lengths"]),
            log_scale=float(data.get("log_scale", 0.0)),
        )

    @classmethod
    def from_json(cls, text: str) -> "IET":
        return cls.from_dict(json.loads(text))


def apply_iet(iet: IET, x: float) -> float:
    """
    Image of x under the exchange.

    Args:
        iet: The transformation
        x: Point of [0, total_length)

    Returns:
        The translated point

    Raises:
        DiscontinuityHit: If x is within tie tolerance of an interior breakpoint
        ValueError: If x lies outside the interval
    """
    total = iet.total_length
    if not 0.0 <= x < total:
        raise ValueError(f"Point {x!r} outside [0, {total!r})")
    breakpoints = iet.top_breakpoints()
    tol = TIE_TOLERANCE * total
    k = bisect_right(breakpoints, x)
    for j in (k - 1, k):
        if 0 <= j < len(breakpoints) and abs(x - breakpoints[j]) <= tol:
            raise DiscontinuityHit(x, breakpoints[j])
    letter = iet.permutation.top[k]
    return x - iet.top_starts()[letter] + iet.bottom_starts()[letter]


def normalize(iet: IET) -> IET:
    """Rescale to total length 1, recording -log of the factor in log_scale."""
    total = iet.total_length
    return IET(
        permutation=iet.permutation,
        lengths=tuple(v / total for v in iet.lengths),
        log_scale=iet.log_scale - math.log(total),
    )


def make_iet(permutation: Permutation, lengths: Sequence[float]) -> IET:
    """Build an IET from raw lengths, without rescaling."""
    return IET(permutation=permutation, lengths=tuple(lengths))
