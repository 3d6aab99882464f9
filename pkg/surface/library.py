"""
Named permutations and surfaces, and random sampling of surfaces in a stratum.
"""
import logging
import math
from typing import Dict

import numpy as np

from iet.errors import ReduciblePermutation
from iet.permutation import Permutation
from surface.errors import InvalidSuspension
from surface.sampling import SeedLike, as_generator
from surface.zippered import ZipperedRectangles, build_surface, heights_from_suspension

logger = logging.getLogger(__name__)

GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0

# symmetric permutation on d letters: d = 2 torus, d = 4 H(2), d = 5 H(1,1)
NAMED_STRATA: Dict[str, int] = {
    "H(0)": 2,
    "torus": 2,
    "H(2)": 4,
    "H(1,1)": 5,
}

TAU_BATCH = 4096
TAU_MAX_BATCHES = 64


def stratum_permutation(name: str) -> Permutation:
    """
    Representative permutation of a named stratum.

    Raises:
        ValueError: If the name is unknown
    """
    key = name.replace(" ", "")
    if key not in NAMED_STRATA:
        raise ValueError(f"Unknown stratum '{name}'. Available: {', '.join(NAMED_STRATA)}")
    return Permutation.symmetric(NAMED_STRATA[key])


def golden_torus() -> ZipperedRectangles:
    """Unit square torus whose first return map is the rotation by the golden mean."""
    return build_surface(Permutation.symmetric(2), (1.0 - GOLDEN, GOLDEN), tau=(1.0, -1.0), unit_area=False)


def canonical_surface(p: Permutation) -> ZipperedRectangles:
    """Unit lengths, canonical suspension datum, unit area."""
    return build_surface(p, [1.0 / p.d] * p.d)


def random_surface(p: Permutation, seed: SeedLike) -> ZipperedRectangles:
    """
    Random unit-area surface over p.

    Lengths are Dirichlet(1, ..., 1); tau is uniform on the cube [-1, 1]^d
    restricted to the suspension cone (rejection sampling in batches).

    Args:
        p: Irreducible permutation
        seed: Integer seed or an existing generator

    Raises:
        ReduciblePermutation: If p is reducible
        InvalidSuspension: If no admissible tau is found within the retry budget
    """
    if not p.is_irreducible():
        raise ReduciblePermutation(f"Permutation {p} is reducible")
    rng = as_generator(seed)
    lengths = rng.dirichlet(np.ones(p.d))

    top_idx, bottom_idx = np.array(p.top), np.array(p.bottom)
    for attempt in range(TAU_MAX_BATCHES):
        candidates = rng.uniform(-1.0, 1.0, size=(TAU_BATCH, p.d))
        top_ok = np.all(np.cumsum(candidates[:, top_idx], axis=1)[:, :-1] > 0, axis=1)
        bottom_ok = np.all(np.cumsum(candidates[:, bottom_idx], axis=1)[:, :-1] < 0, axis=1)
        admissible = np.nonzero(top_ok & bottom_ok)[0]
        if len(admissible):
            tau = candidates[admissible[0]]
            break
        logger.debug(f"No admissible suspension datum in batch {attempt}")
    else:
        raise InvalidSuspension(f"No suspension datum found for {p} after {TAU_MAX_BATCHES} batches")

    heights_from_suspension(p, tau)
    return build_surface(p, lengths, tau)


GOLDEN_TORUS_NAMES = ("golden-torus", "golden_torus")


def resolve_stratum(spec: str) -> Permutation:
    """
    Permutation for a stratum spec: a named stratum, ``golden-torus``, or
    permutation text such as ``A B C D / D C B A``.

    Raises:
        ValueError: If the spec is unknown or the permutation is reducible
    """
    text = spec.strip()
    if text in GOLDEN_TORUS_NAMES:
        return Permutation.symmetric(2)
    if text.replace(" ", "") in NAMED_STRATA:
        return stratum_permutation(text)
    if "/" not in text and "\n" not in text:
        raise ValueError(f"Unknown stratum '{spec}'. Use one of {', '.join(NAMED_STRATA)}, "
                         f"golden-torus, or two rows of letters")
    p = Permutation.from_text(text)
    if not p.is_irreducible():
        raise ReduciblePermutation(f"Permutation {p} is reducible")
    return p


def stratum_surface(spec: str, seed: SeedLike) -> ZipperedRectangles:
    """The golden torus for ``golden-torus``, otherwise a random surface over the resolved permutation."""
    if spec.strip() in GOLDEN_TORUS_NAMES:
        return golden_torus()
    return random_surface(resolve_stratum(spec), seed)
