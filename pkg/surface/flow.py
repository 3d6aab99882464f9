"""
Unit-speed vertical flow on zippered rectangles.

A point moves up its rectangle; at the roof it is carried to the base by the
interval exchange and keeps moving. Orbits can be recorded as sequences of
rectangle crossings, which is all the integrators need.
"""
import logging
from bisect import bisect_right
from dataclasses import dataclass
from typing import List, Tuple

import numpy as np

from surface.errors import SingularityHit
from surface.zippered import SINGULARITY_CLEARANCE, SurfacePoint, ZipperedRectangles

logger = logging.getLogger(__name__)

ROOF_TOLERANCE = 1e-12  # relative to the rectangle height


@dataclass(frozen=True, eq=False)
class OrbitRecord:
    """
    Crossing structure of an orbit segment of length ``duration``.

    Segment i runs through rectangle ``cells[i]`` at local abscissa ``xs[i]``,
    from height ``y0[i]`` to ``y1[i]``, starting at orbit time ``t0[i]``.
    """
    cells: np.ndarray
    xs: np.ndarray
    y0: np.ndarray
    y1: np.ndarray
    t0: np.ndarray
    duration: float

    def __len__(self) -> int:
        return len(self.cells)

    @property
    def durations(self) -> np.ndarray:
        return self.y1 - self.y0

    def locate(self, times: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Rectangle, abscissa and height of the orbit at the given times."""
        times = np.asarray(times, dtype=float)
        seg = np.clip(np.searchsorted(self.t0, times, side="right") - 1, 0, len(self) - 1)
        y = np.minimum(self.y0[seg] + (times - self.t0[seg]), self.y1[seg])
        return self.cells[seg], self.xs[seg], y


class _Geometry:
    """Plain-float lookup tables for the scalar flow loop."""

    def __init__(self, s: ZipperedRectangles):
        self.heights = list(s.heights)
        self.top_starts = s.top_starts.tolist()
        self.bottom_starts = s.bottom_starts.tolist()
        self.breakpoints = s.top_breakpoints.tolist()
        self.top_order = list(s.permutation.top)
        self.clearance = SINGULARITY_CLEARANCE * s.total_length

    def land(self, cell: int, x: float, time: float) -> Tuple[int, float]:
        xg = x + self.bottom_starts[cell]
        k = bisect_right(self.breakpoints, xg)
        for j in (k - 1, k):
            if 0 <= j < len(self.breakpoints) and abs(xg - self.breakpoints[j]) <= self.clearance:
                raise SingularityHit(time, xg)
        new_cell = self.top_order[k]
        return new_cell, xg - self.top_starts[new_cell]


def _check_point(s: ZipperedRectangles, pt: SurfacePoint) -> None:
    if not s.contains(pt):
        raise ValueError(f"Point {pt} is not inside its rectangle")


def flow(s: ZipperedRectangles, pt: SurfacePoint, t: float) -> SurfacePoint:
    """
    Position of pt after flowing for time t >= 0.

    Raises:
        SingularityHit: If the orbit meets a cone point before time t
    """
    if t < 0:
        raise ValueError(f"Flow time must be non-negative, got {t}")
    _check_point(s, pt)
    geo = _Geometry(s)
    cell, x, y = pt.cell, pt.x, pt.y
    remaining, elapsed = float(t), 0.0
    while True:
        h = geo.heights[cell]
        to_roof = h - y
        if remaining < to_roof - ROOF_TOLERANCE * h:
            return SurfacePoint(cell, x, y + remaining)
        remaining = max(remaining - to_roof, 0.0)
        elapsed += to_roof
        cell, x = geo.land(cell, x, elapsed)
        y = 0.0


def first_return(s: ZipperedRectangles, pt: SurfacePoint) -> Tuple[SurfacePoint, float]:
    """
    First return to the base transversal.

    Returns:
        (landing point on the base, return time = height of pt's rectangle)

    Raises:
        SingularityHit: If the landing point is a discontinuity
    """
    _check_point(s, pt)
    if pt.y != 0.0:
        raise ValueError(f"Point {pt} is not on the base transversal")
    geo = _Geometry(s)
    h = geo.heights[pt.cell]
    cell, x = geo.land(pt.cell, pt.x, h)
    return SurfacePoint(cell, x, 0.0), h


def record_orbit(s: ZipperedRectangles, pt: SurfacePoint, duration: float) -> OrbitRecord:
    """
    Crossing record of the orbit of pt over [0, duration].

    Raises:
        SingularityHit: If the orbit meets a cone point
    """
    if duration < 0:
        raise ValueError(f"Duration must be non-negative, got {duration}")
    _check_point(s, pt)
    geo = _Geometry(s)
    cells: List[int] = []
    xs: List[float] = []
    y0: List[float] = []
    y1: List[float] = []
    t0: List[float] = []
    cell, x, y, elapsed = pt.cell, pt.x, pt.y, 0.0
    while True:
        h = geo.heights[cell]
        to_roof = h - y
        remaining = duration - elapsed
        cells.append(cell)
        xs.append(x)
        y0.append(y)
        t0.append(elapsed)
        if remaining < to_roof - ROOF_TOLERANCE * h:
            y1.append(y + max(remaining, 0.0))
            break
        y1.append(h)
        elapsed += to_roof
        cell, x = geo.land(cell, x, elapsed)
        y = 0.0
    return OrbitRecord(np.array(cells), np.array(xs), np.array(y0), np.array(y1), np.array(t0), float(duration))


def _near_breakpoint(s: ZipperedRectangles, xg: np.ndarray) -> np.ndarray:
    bp = s.top_breakpoints
    if len(bp) == 0:
        return np.zeros(xg.shape, dtype=bool)
    k = np.searchsorted(bp, xg)
    left = np.abs(xg - bp[np.clip(k - 1, 0, len(bp) - 1)])
    right = np.abs(xg - bp[np.clip(k, 0, len(bp) - 1)])
    return np.minimum(left, right) <= SINGULARITY_CLEARANCE * s.total_length


def record_orbits(s: ZipperedRectangles, cells: np.ndarray, xs: np.ndarray, ys: np.ndarray,
                  duration: float, raise_on_singular: bool = True) -> Tuple[List[OrbitRecord], np.ndarray]:
    """
    Crossing records of many orbits at once.

    All orbits advance one crossing per iteration, so the loop runs as many
    times as the longest orbit has crossings.

    Args:
        s: Surface
        cells, xs, ys: Starting points, one entry per orbit
        duration: Common orbit length
        raise_on_singular: Raise on the first singular orbit instead of masking it

    Returns:
        (records, singular mask); records of singular orbits are truncated

    Raises:
        SingularityHit: If raise_on_singular and some orbit meets a cone point
    """
    cell = np.array(cells, dtype=int)
    x = np.array(xs, dtype=float)
    y = np.array(ys, dtype=float)
    n = len(cell)
    heights = s.heights_array
    t = np.zeros(n)
    active = np.ones(n, dtype=bool)
    singular = np.zeros(n, dtype=bool)
    rows = []
    while active.any():
        idx = np.nonzero(active)[0]
        h = heights[cell[idx]]
        to_roof = h - y[idx]
        remaining = np.maximum(duration - t[idx], 0.0)
        crosses = remaining >= to_roof - ROOF_TOLERANCE * h
        rows.append((idx, cell[idx], x[idx], y[idx], np.where(crosses, h, y[idx] + remaining), t[idx].copy()))
        active[idx[~crosses]] = False

        moving = idx[crosses]
        t[moving] += to_roof[crosses]
        xg = x[moving] + s.bottom_starts[cell[moving]]
        bad = _near_breakpoint(s, xg)
        if bad.any():
            if raise_on_singular:
                first = int(np.argmax(bad))
                raise SingularityHit(float(t[moving[first]]), float(xg[first]))
            singular[moving[bad]] = True
            active[moving[bad]] = False
            logger.debug(f"{int(bad.sum())} orbits met a singularity")
        moving, xg = moving[~bad], xg[~bad]
        new_cell = s.locate(xg)
        cell[moving] = new_cell
        x[moving] = xg - s.top_starts[new_cell]
        y[moving] = 0.0

    columns = [np.concatenate([r[k] for r in rows]) for k in range(6)]
    order = np.argsort(columns[0], kind="stable")
    owner, seg_cells, seg_x, seg_y0, seg_y1, seg_t0 = (c[order] for c in columns)
    bounds = np.searchsorted(owner, np.arange(n + 1))
    records = [
        OrbitRecord(seg_cells[a:b], seg_x[a:b], seg_y0[a:b], seg_y1[a:b], seg_t0[a:b], float(duration))
        for a, b in zip(bounds[:-1], bounds[1:])
    ]
    return records, singular


def flow_batch(s: ZipperedRectangles, cells: np.ndarray, xs: np.ndarray, ys: np.ndarray,
               times: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Flow many points, each for its own time.

    Raises:
        SingularityHit: If any orbit meets a cone point
    """
    cell = np.array(cells, dtype=int)
    x = np.array(xs, dtype=float)
    y = np.array(ys, dtype=float)
    remaining = np.array(times, dtype=float) * np.ones(len(cell))
    elapsed = np.zeros(len(cell))
    heights = s.heights_array
    active = np.ones(len(cell), dtype=bool)
    while active.any():
        idx = np.nonzero(active)[0]
        h = heights[cell[idx]]
        to_roof = h - y[idx]
        crosses = remaining[idx] >= to_roof - ROOF_TOLERANCE * h
        stay = idx[~crosses]
        y[stay] += remaining[stay]
        active[stay] = False
        moving = idx[crosses]
        remaining[moving] = np.maximum(remaining[moving] - to_roof[crosses], 0.0)
        elapsed[moving] += to_roof[crosses]
        xg = x[moving] + s.bottom_starts[cell[moving]]
        bad = _near_breakpoint(s, xg)
        if bad.any():
            raise SingularityHit(float(elapsed[moving[bad][0]]), float(xg[bad][0]))
        new_cell = s.locate(xg)
        cell[moving] = new_cell
        x[moving] = xg - s.top_starts[new_cell]
        y[moving] = 0.0
    return cell, x, y
