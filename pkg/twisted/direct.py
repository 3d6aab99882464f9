"""
Direct twisted integrals: exact closed forms summed crossing by crossing.

A crossing of rectangle j at abscissa x, from height y0 during time delta,
starting at clock time t, contributes for each term (m, n, c)

    c exp(2 pi i (m x / l_j + n y0 / h_j + lam t)) * delta * E((n / h_j + lam) delta)

with E the cycle average (exp(2 pi i z) - 1) / (2 pi i z).
"""
import logging
import math
from typing import Tuple

import numpy as np

from observables.cellwise import CellwiseObservable, cycle_average
from surface.flow import OrbitRecord, record_orbit, record_orbits
from surface.zippered import SurfacePoint, ZipperedRectangles
from twisted.errors import NonFiniteInput
from twisted.models import TwistedTrace

logger = logging.getLogger(__name__)


def check_finite(lam: float, T: float, t0: float = 0.0) -> None:
    """
    Raises:
        NonFiniteInput: If lam, T or t0 is not finite, or T is negative
    """
    for name, value in (("lambda", lam), ("T", T), ("t0", t0)):
        if not math.isfinite(value):
            raise NonFiniteInput(f"{name} must be finite, got {value!r}")
    if T < 0:
        raise NonFiniteInput(f"T must be non-negative, got {T!r}")


def cell_integrals(s: ZipperedRectangles, f: CellwiseObservable, lam: float, cells: np.ndarray,
                   xs: np.ndarray, y0: np.ndarray, clock: np.ndarray, delta: np.ndarray) -> np.ndarray:
    """Closed-form twisted integral over each vertical piece (vectorized)."""
    out = np.zeros(len(cells), dtype=complex)
    if len(cells) == 0:
        return out
    lengths, heights = s.lengths_array, s.heights_array
    phase_clock = np.exp(2j * np.pi * np.mod(lam * clock, 1.0))
    for t in f.terms:
        mask = cells == t.cell
        if not mask.any():
            continue
        h = heights[t.cell]
        base = t.m * xs[mask] / lengths[t.cell] + t.n * y0[mask] / h
        d = delta[mask]
        out[mask] += (t.c * np.exp(2j * np.pi * np.mod(base, 1.0)) * phase_clock[mask]
                      * d * cycle_average((t.n / h + lam) * d))
    return out


def segment_contributions(s: ZipperedRectangles, f: CellwiseObservable, lam: float,
                          record: OrbitRecord, t0: float = 0.0) -> np.ndarray:
    """Contribution of every crossing of a recorded orbit."""
    return cell_integrals(s, f, lam, record.cells, record.xs, record.y0, t0 + record.t0, record.durations)


def prefix_integrals(s: ZipperedRectangles, f: CellwiseObservable, lam: float, record: OrbitRecord,
                     times: np.ndarray, t0: float = 0.0) -> np.ndarray:
    """
    int_0^T of the twisted integrand along the recorded orbit, for every T in ``times``.

    Args:
        times: Values in [0, record.duration]
    """
    times = np.asarray(times, dtype=float)
    contrib = segment_contributions(s, f, lam, record, t0)
    cumulative = np.concatenate([[0j], np.cumsum(contrib)])
    seg = np.clip(np.searchsorted(record.t0, times, side="right") - 1, 0, len(record) - 1)
    partial = np.clip(times - record.t0[seg], 0.0, record.durations[seg])
    tail = cell_integrals(s, f, lam, record.cells[seg], record.xs[seg], record.y0[seg],
                          t0 + record.t0[seg], partial)
    return cumulative[seg] + tail


def twisted_integral_direct(s: ZipperedRectangles, f: CellwiseObservable, lam: float, x0: SurfacePoint,
                            T: float, t0: float = 0.0) -> TwistedTrace:
    """
    int_0^T exp(2 pi i lam (t0 + t)) f(phi_t(x0)) dt by exact crossing sums.

    Args:
        s: Surface
        f: Cellwise observable
        lam: Frequency
        x0: Start point
        T: Flow time
        t0: Clock value at x0 (absolute phase offset)

    Returns:
        TwistedTrace with absolute phase

    Raises:
        SingularityHit: If the orbit meets a cone point before time T
        NonFiniteInput: On non-finite lam, T or t0
    """
    check_finite(lam, T, t0)
    record = record_orbit(s, x0, T)
    value = complex(np.sum(segment_contributions(s, f, lam, record, t0)))
    logger.debug(f"Direct twisted integral over {len(record)} crossings: {value}")
    return TwistedTrace(value=value, T=T, lam=lam, start=x0, absolute_phase=True, t0=t0, n_blocks=len(record))


def twisted_integrals_batch(s: ZipperedRectangles, f: CellwiseObservable, lam: float, cells: np.ndarray,
                            xs: np.ndarray, ys: np.ndarray, T: float) -> Tuple[np.ndarray, np.ndarray]:
    """
    Twisted integrals over [0, T] from many start points at once.

    Returns:
        (values, singular mask); values of singular orbits are meaningless
    """
    check_finite(lam, T)
    records, singular = record_orbits(s, cells, xs, ys, T, raise_on_singular=False)
    lengths = np.array([len(r) for r in records])
    owner = np.repeat(np.arange(len(records)), lengths)
    contrib = cell_integrals(
        s, f, lam,
        np.concatenate([r.cells for r in records]),
        np.concatenate([r.xs for r in records]),
        np.concatenate([r.y0 for r in records]),
        np.concatenate([r.t0 for r in records]),
        np.concatenate([r.durations for r in records]),
    )
    values = np.zeros(len(records), dtype=complex)
    np.add.at(values, owner, contrib)
    return values, singular
