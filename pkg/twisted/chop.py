"""
Splitting an orbit segment [0, T] into consecutive pieces of Teichmuller scale.

With scales T_l = exp(t_l) and n the largest index with T_n <= T, the greedy
rule takes as many pieces of the largest scale as fit, then the next, and so
on. The smallest scale keeps one piece back whenever it would otherwise leave
nothing, so the remainder tau lies in (0, T_1] unless T is an exact sum that
ends above scale 1. When T_1 is the only scale that fits, pieces are taken
whole and an exact multiple of T_1 leaves no remainder.
"""
import logging
import math
from typing import List, Sequence

import numpy as np

from observables.cellwise import CellwiseObservable
from surface.flow import flow
from surface.zippered import SurfacePoint, ZipperedRectangles
from twisted.direct import twisted_integral_direct
from twisted.errors import EmptyTimes, NonFiniteInput
from twisted.models import ChopDecomposition, ChopSegment, TwistedTrace

logger = logging.getLogger(__name__)


def _fitting_count(remaining: float, scale: float) -> int:
    m = int(remaining // scale)
    while m > 0 and m * scale > remaining:
        m -= 1
    return m


def chop_decompose(T: float, times: Sequence[float]) -> ChopDecomposition:
    """
    Greedy largest-scale-first decomposition of [0, T].

    Args:
        T: Orbit length (> 0)
        times: Nondecreasing Teichmuller times t_1..t_n

    Returns:
        ChopDecomposition with counts m_l <= exp(t_{l+1} - t_l) and sum m_l T_l + tau = T

    Raises:
        EmptyTimes: If no times are given
        ValueError: If T <= 0 or times decrease
    """
    if len(times) == 0:
        raise EmptyTimes("Decomposition needs at least one Teichmuller time")
    if not math.isfinite(T):
        raise NonFiniteInput(f"T must be finite, got {T!r}")
    if T <= 0:
        raise ValueError(f"T must be positive, got {T}")
    if any(b < a for a, b in zip(times[:-1], times[1:])):
        raise ValueError("Teichmuller times must be nondecreasing")

    scales = [math.exp(t) for t in times]
    top = max((l for l, scale in enumerate(scales) if scale <= T), default=-1)
    counts = [0] * len(scales)
    remaining = T
    for l in range(top, 0, -1):
        counts[l] = _fitting_count(remaining, scales[l])
        remaining -= counts[l] * scales[l]
    if top == 0:
        counts[0] = _fitting_count(remaining, scales[0])
    elif top > 0:
        counts[0] = max(math.ceil(remaining / scales[0] - 1e-9) - 1, 0)
        if counts[0] * scales[0] > remaining:
            counts[0] = _fitting_count(remaining, scales[0])
    used = math.fsum(m * scale for m, scale in zip(counts, scales))
    remainder = max(T - used, 0.0)

    segments: List[ChopSegment] = []
    clock = 0.0
    for l in range(len(scales) - 1, -1, -1):
        for _ in range(counts[l]):
            segments.append(ChopSegment(start=clock, length=scales[l], level=l + 1))
            clock += scales[l]
    if remainder > 0:
        segments.append(ChopSegment(start=clock, length=remainder, level=0))
    logger.debug(f"Decomposed T={T} into {len(segments)} segments, remainder {remainder}")
    return ChopDecomposition(T=T, scales=scales, counts=counts, remainder=remainder, segments=segments)


def twisted_trace_over_segments(s: ZipperedRectangles, f: CellwiseObservable, lam: float, x0: SurfacePoint,
                                decomposition: ChopDecomposition) -> TwistedTrace:
    """
    Sum of absolute-phase traces over the decomposition's segments.

    Each segment starts where the previous one ended, on the same orbit clock.
    """
    total = None
    point = x0
    for segment in decomposition.segments:
        trace = twisted_integral_direct(s, f, lam, point, segment.length, t0=segment.start)
        total = trace if total is None else total + trace
        point = flow(s, point, segment.length)
    if total is None:
        return TwistedTrace(0j, 0.0, lam, x0)
    return TwistedTrace(total.value, decomposition.T, lam, x0, True, 0.0, total.n_blocks)


def scale_excess(times: Sequence[float], n: int) -> float:
    """
    (sum_{j < n} exp(2 (t_{j+1} - t_j)))^3, the factor by which pieces of
    scale up to n inflate the bound exp((1 - alpha) t_n).
    """
    if n < 1 or n > len(times):
        raise ValueError(f"n must be in 1..{len(times)}, got {n}")
    gaps = np.diff(np.asarray(times[:n], dtype=float))
    return float(np.sum(np.exp(2.0 * gaps)) ** 3) if len(gaps) else 1.0
