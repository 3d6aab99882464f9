"""
Zippered rectangles over an interval exchange.

Rectangle a stands on the top interval of letter a, has height heights[a],
and its roof is glued to the bottom interval of a.
"""
import hashlib
import json
import logging
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Any, Dict, Optional, Sequence, Tuple

import numpy as np

from iet.permutation import Permutation
from iet.transformation import IET
from surface.errors import InvalidSuspension

logger = logging.getLogger(__name__)

SINGULARITY_CLEARANCE = 1e-12


@dataclass(frozen=True)
class SurfacePoint:
    """A point of rectangle ``cell`` in local coordinates."""
    cell: int
    x: float
    y: float


def heights_from_suspension(p: Permutation, tau: Sequence[float]) -> np.ndarray:
    """
    Heights h = Omega tau of the zippered rectangles.

    Args:
        p: Permutation
        tau: Suspension datum, one real per letter

    Returns:
        Strictly positive heights, indexed by letter

    Raises:
        InvalidSuspension: If tau is outside the suspension cone or a height is not positive
    """
    tau = np.asarray(tau, dtype=float)
    if tau.shape != (p.d,):
        raise InvalidSuspension(f"Suspension datum needs {p.d} entries, got shape {tau.shape}")
    top_prefix = np.cumsum([tau[a] for a in p.top])[:-1]
    bottom_prefix = np.cumsum([tau[a] for a in p.bottom])[:-1]
    if np.any(top_prefix <= 0) or np.any(bottom_prefix >= 0):
        raise InvalidSuspension(f"Suspension datum {tau.tolist()} is outside the cone of {p}")
    heights = p.intersection_matrix() @ tau
    if np.any(heights <= 0):
        raise InvalidSuspension(f"Non-positive height in {heights.tolist()}")
    return heights


@dataclass(frozen=True)
class ZipperedRectangles:
    iet: IET
    tau: Tuple[float, ...]
    heights: Tuple[float, ...]
    area: float

    def __post_init__(self):
        if len(self.tau) != self.iet.d or len(self.heights) != self.iet.d:
            raise InvalidSuspension("tau and heights must have one entry per letter")
        if any(h <= 0 for h in self.heights):
            raise InvalidSuspension(f"Non-positive height in {self.heights}")

    @property
    def d(self) -> int:
        return self.iet.d

    @property
    def permutation(self) -> Permutation:
        return self.iet.permutation

    @cached_property
    def lengths_array(self) -> np.ndarray:
        return np.array(self.iet.lengths)

    @cached_property
    def heights_array(self) -> np.ndarray:
        return np.array(self.heights)

    @cached_property
    def top_starts(self) -> np.ndarray:
        return np.array(self.iet.top_starts())

    @cached_property
    def bottom_starts(self) -> np.ndarray:
        return np.array(self.iet.bottom_starts())

    @cached_property
    def top_breakpoints(self) -> np.ndarray:
        return np.array(self.iet.top_breakpoints())

    @cached_property
    def top_order(self) -> np.ndarray:
        return np.array(self.permutation.top)

    @property
    def total_length(self) -> float:
        return self.iet.total_length

    def rectangle_areas(self) -> np.ndarray:
        return self.lengths_array * self.heights_array

    def locate(self, xg: np.ndarray) -> np.ndarray:
        """Letters whose top intervals contain the base positions ``xg``."""
        k = np.searchsorted(self.top_breakpoints, xg, side="right")
        return self.top_order[np.minimum(k, self.d - 1)]

    def base_point(self, xg: float) -> SurfacePoint:
        cell = int(self.locate(np.array([xg]))[0])
        return SurfacePoint(cell, xg - float(self.top_starts[cell]), 0.0)

    def global_x(self, pt: SurfacePoint) -> float:
        return float(self.top_starts[pt.cell]) + pt.x

    def contains(self, pt: SurfacePoint) -> bool:
        return (0 <= pt.cell < self.d and 0.0 <= pt.x < self.iet.lengths[pt.cell]
                and 0.0 <= pt.y < self.heights[pt.cell])

    def to_dict(self) -> Dict[str, Any]:
        return {
            "permutation": self.permutation.to_text(),
            "lengths": list(self.iet.lengths),
            "tau": list(self.tau),
            "heights": list(self.heights),
            "area": self.area,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    def digest(self) -> str:
        """SHA-256 of the JSON form; identifies the surface in run artifacts."""
        return hashlib.sha256(self.to_json().encode("utf-8")).hexdigest()

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "ZipperedRectangles":
        iet = IET(Permutation.from_text(data["permutation"]), tuple(data["lengths"]))
        return cls(iet=iet, tau=tuple(data["tau"]), heights=tuple(data["heights"]), area=float(data["area"]))

    @classmethod
    def from_json(cls, text: str) -> "ZipperedRectangles":
        return cls.from_dict(json.loads(text))


def build_surface(p: Permutation, lengths: Sequence[float], tau: Optional[Sequence[float]] = None,
                  unit_area: bool = True) -> ZipperedRectangles:
    """
    Zippered rectangles for (p, lengths, tau).

    Args:
        p: Irreducible permutation
        lengths: Interval lengths, indexed by letter
        tau: Suspension datum (canonical datum when omitted)
        unit_area: Rescale heights and tau so that the total area is 1

    Raises:
        InvalidSuspension: If tau is outside the suspension cone
    """
    iet = IET(permutation=p, lengths=tuple(lengths))
    tau_arr = p.canonical_suspension() if tau is None else np.asarray(tau, dtype=float)
    heights = heights_from_suspension(p, tau_arr)
    area = math.fsum(iet.array * heights)
    if unit_area:
        heights, tau_arr, area = heights / area, tau_arr / area, 1.0
    return ZipperedRectangles(iet=iet, tau=tuple(tau_arr.tolist()), heights=tuple(heights.tolist()), area=area)

