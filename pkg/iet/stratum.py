"""
Genus and stratum of a permutation.

The vertices of the suspension polygon (unit lengths, canonical suspension
datum) are glued along the side identifications; each class of vertices is a
cone point whose total angle is 2*pi*(k + 1).
"""
import logging
import math
from typing import List, Tuple

import numpy as np

from iet.errors import ReduciblePermutation
from iet.permutation import Permutation

logger = logging.getLogger(__name__)


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, a: int) -> int:
        while self.parent[a] != a:
            self.parent[a] = self.parent[self.parent[a]]
            a = self.parent[a]
        return a

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[rb] = ra


def singularity_profile(p: Permutation) -> List[int]:
    """
    Cone angle multiplicity k + 1 of every vertex class, marked points included.

    Raises:
        ReduciblePermutation: If p is reducible
    """
    if not p.is_irreducible():
        raise ReduciblePermutation(f"Permutation {p} is reducible")
    d = p.d
    tau = p.canonical_suspension()
    zeta = np.ones(d) + 1j * tau

    # Vertex ids: P_0..P_d are 0..d, Q_k (0 < k < d) is d + k. Q_0 = P_0, Q_d = P_d.
    def q_id(k: int) -> int:
        if k == 0:
            return 0
        if k == d:
            return d
        return d + k

    top_pts = np.concatenate([[0], np.cumsum([zeta[a] for a in p.top])])
    bot_pts = np.concatenate([[0], np.cumsum([zeta[a] for a in p.bottom])])
    position = {k: top_pts[k] for k in range(d + 1)}
    position.update({d + k: bot_pts[k] for k in range(1, d)})

    uf = _UnionFind(2 * d)
    tp, bp = p.top_positions(), p.bottom_positions()
    for a in range(d):
        uf.union(tp[a], q_id(bp[a]))
        uf.union(tp[a] + 1, q_id(bp[a] + 1))

    # counter-clockwise: lower chain left to right, then upper chain back
    ring = [0] + [d + k for k in range(1, d)] + [d] + list(range(d - 1, 0, -1))
    angles = {}
    n = len(ring)
    for i, v in enumerate(ring):
        prev_pt, here, next_pt = position[ring[i - 1]], position[v], position[ring[(i + 1) % n]]
        e1, e2 = here - prev_pt, next_pt - here
        turn = math.atan2((e1.conjugate() * e2).imag, (e1.conjugate() * e2).real)
        angles[v] = math.pi - turn

    totals = {}
    for v, angle in angles.items():
        root = uf.find(v)
        totals[root] = totals.get(root, 0.0) + angle
    profile = []
    for total in totals.values():
        multiplicity = total / (2 * math.pi)
        rounded = round(multiplicity)
        if abs(multiplicity - rounded) > 1e-6:
            raise RuntimeError(f"Cone angle {total} is not a multiple of 2*pi")
        profile.append(int(rounded))
    return sorted(profile, reverse=True)


def genus_and_stratum(p: Permutation) -> Tuple[int, Tuple[int, ...]]:
    """
    Genus g and zero multiplicities kappa (regular marked points dropped).

    Returns:
        (g, kappa) with sum(kappa) = 2g - 2 and d = 2g + s - 1, s counting
        every vertex class

    Raises:
        ReduciblePermutation: If p is reducible
    """
    profile = singularity_profile(p)
    s = len(profile)
    g = (p.d - s + 1) // 2
    kappa = tuple(m - 1 for m in profile if m > 1)
    logger.debug(f"Permutation {p}: genus {g}, stratum H{kappa}, {s} vertex classes")
    return g, kappa


def stratum_name(kappa: Tuple[int, ...]) -> str:
    if not kappa:
        return "H(0)"
    return "H(" + ",".join(str(k) for k in kappa) + ")"


def twisted_cohomology_dimension(genus: int, integral_class: bool) -> int:
    """Dimension of twisted cohomology: 2g at integral classes, 2g - 2 otherwise."""
    return 2 * genus if integral_class else 2 * genus - 2
