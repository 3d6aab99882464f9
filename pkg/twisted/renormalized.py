"""
Renormalized twisted Birkhoff integrals for cellwise-constant observables.

Each Zorich level k gives an induced interval I^k, heights h^k and block
integrals Phi_k[a] (the twisted integral over one full return of letter a,
started at clock 0). Levels share the base coordinate, because right
induction keeps the left endpoint at 0. An orbit climbs to the deepest level
whose blocks still fit in the remaining time, adds whole blocks, and splits
the last block down the return words until only a partial crossing is left.
"""
import logging
import math
from dataclasses import dataclass
from typing import Dict, List, Optional

import numpy as np

from cocycles.twisted_matrix import geometric_phase_sum, word_phase_terms
from iet.errors import ConnectionDetected
from iet.induction import Run, zorich_move
from iet.transformation import IET
from observables.cellwise import CellwiseObservable, cycle_average
from surface.errors import SingularityHit
from surface.flow import ROOF_TOLERANCE
from surface.zippered import SINGULARITY_CLEARANCE, SurfacePoint, ZipperedRectangles
from twisted.direct import check_finite
from twisted.errors import UnsupportedObservable
from twisted.models import TwistedTrace

logger = logging.getLogger(__name__)

MAX_LEVELS = 400


@dataclass
class _Level:
    iet: IET
    heights: np.ndarray
    phi: np.ndarray
    words: Optional[Dict[int, List[Run]]]

    def __post_init__(self):
        self.total = self.iet.total_length
        self.breakpoints = self.iet.top_breakpoints()
        self.top_starts = self.iet.top_starts()
        self.bottom_starts = self.iet.bottom_starts()
        self.top_order = list(self.iet.permutation.top)
        self.min_height = float(self.heights.min())

    def locate(self, xg: float, clearance: float, clock: float) -> int:
        k = int(np.searchsorted(self.breakpoints, xg, side="right"))
        for j in (k - 1, k):
            if 0 <= j < len(self.breakpoints) and abs(xg - self.breakpoints[j]) <= clearance:
                raise SingularityHit(clock, xg)
        return self.top_order[k]

    def apply(self, xg: float, letter: int) -> float:
        return xg - self.top_starts[letter] + self.bottom_starts[letter]


class RenormalizationLadder:
    """Lazily built tower of Zorich levels with their block integrals at one frequency."""

    def __init__(self, s: ZipperedRectangles, f: CellwiseObservable, lam: float, max_levels: int = MAX_LEVELS):
        if not f.is_cellwise_constant:
            raise UnsupportedObservable("Renormalized integration needs a cellwise-constant observable")
        self.lam = lam
        self.max_levels = max_levels
        self.exhausted = False
        self.constants = f.cell_constants()
        heights = s.heights_array.copy()
        phi0 = self.constants * heights * cycle_average(lam * heights)
        self.levels: List[_Level] = [_Level(iet=s.iet, heights=heights, phi=phi0, words=None)]

    def level(self, k: int) -> Optional[_Level]:
        """Level k, building it if needed; None once induction stops."""
        while len(self.levels) <= k:
            if self.exhausted or len(self.levels) >= self.max_levels:
                return None
            prev = self.levels[-1]
            try:
                induced, move = zorich_move(prev.iet)
            except ConnectionDetected as e:
                logger.warning(f"Renormalization stopped at level {len(self.levels)}: {e}")
                self.exhausted = True
                return None
            words = move.return_words()
            phases = self.lam * prev.heights
            phi = np.zeros(len(prev.phi), dtype=complex)
            for a, runs in words.items():
                for letter, weight in word_phase_terms(runs, phases):
                    phi[a] += weight * prev.phi[letter]
            heights = move.matrix().T.astype(float) @ prev.heights
            self.levels.append(_Level(iet=induced, heights=heights, phi=phi, words=words))
        return self.levels[k]


def _phase(lam: float, clock: float) -> complex:
    return complex(np.exp(2j * np.pi * math.fmod(lam * clock, 1.0)))


def twisted_sum_renormalized(s: ZipperedRectangles, f: CellwiseObservable, lam: float, x0: SurfacePoint,
                             T: float, t0: float = 0.0,
                             ladder: Optional[RenormalizationLadder] = None) -> TwistedTrace:
    """
    Same quantity as twisted_integral_direct, in O(levels) block operations.

    Args:
        s: Surface
        f: Cellwise-constant observable
        lam: Frequency
        x0: Start point
        T: Flow time
        t0: Clock value at x0
        ladder: A ladder for (s, f, lam) to reuse across calls

    Raises:
        UnsupportedObservable: If f has a non-constant cell term
        SingularityHit: If the orbit meets a cone point
        NonFiniteInput: On non-finite lam, T or t0
    """
    check_finite(lam, T, t0)
    if ladder is None:
        ladder = RenormalizationLadder(s, f, lam)
    c = ladder.constants
    clearance = SINGULARITY_CLEARANCE * s.total_length
    base = ladder.level(0)

    # partial crossing of the starting rectangle
    h = base.heights[x0.cell]
    to_roof = h - x0.y
    if T < to_roof - ROOF_TOLERANCE * h:
        value = c[x0.cell] * _phase(lam, t0) * T * complex(cycle_average(lam * T))
        return TwistedTrace(value, T, lam, x0, True, t0, 1)
    value = c[x0.cell] * _phase(lam, t0) * to_roof * complex(cycle_average(lam * to_roof))
    clock = t0 + to_roof
    remaining = T - to_roof
    blocks = 1
    xg = base.apply(s.global_x(x0), x0.cell)

    k = 0
    while True:
        lvl = ladder.level(k)
        nxt = ladder.level(k + 1)
        if nxt is not None and xg < nxt.total and nxt.min_height <= remaining:
            k += 1
            continue
        letter = lvl.locate(xg, clearance, clock - t0)
        hk = lvl.heights[letter]
        if hk > remaining:
            tail, clock = _split_block(ladder, k, letter, remaining, clock, lam)
            value += tail
            blocks += k + 1
            break
        value += _phase(lam, clock) * lvl.phi[letter]
        clock += hk
        remaining -= hk
        blocks += 1
        xg = lvl.apply(xg, letter)
        if xg >= lvl.total - clearance:
            raise SingularityHit(clock - t0, xg)

    logger.debug(f"Renormalized twisted integral: {blocks} blocks, deepest level {len(ladder.levels) - 1}")
    return TwistedTrace(value=complex(value), T=T, lam=lam, start=x0, absolute_phase=True, t0=t0, n_blocks=blocks)


def _split_block(ladder: RenormalizationLadder, level: int, letter: int, remaining: float, clock: float,
                 lam: float):
    """Integral over the first ``remaining`` time units of a level block."""
    value = 0j
    while level > 0:
        below = ladder.levels[level - 1]
        runs = ladder.levels[level].words[letter]
        split = False
        for beta, count in runs:
            hb = below.heights[beta]
            fits = min(count, int(remaining // hb))
            while fits > 0 and fits * hb > remaining:
                fits -= 1
            if fits > 0:
                value += _phase(lam, clock) * below.phi[beta] * geometric_phase_sum(lam * hb, fits)
                clock += fits * hb
                remaining -= fits * hb
            if fits < count:
                level, letter, split = level - 1, beta, True
                break
        if not split:
            return value, clock
    remaining = max(remaining, 0.0)
    value += ladder.constants[letter] * _phase(lam, clock) * remaining * complex(cycle_average(lam * remaining))
    return value, clock + remaining
