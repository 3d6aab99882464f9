"""
Translation surfaces as zippered rectangles, with the vertical suspension flow.
"""
from surface.errors import InvalidSuspension, SingularityHit
from surface.flow import OrbitRecord, first_return, flow, flow_batch, record_orbit, record_orbits
from surface.library import (
    GOLDEN,
    canonical_surface,
    golden_torus,
    random_surface,
    resolve_stratum,
    stratum_permutation,
    stratum_surface,
)
from surface.sampling import rng_stream, split_counts
from surface.zippered import (
    SurfacePoint,
    ZipperedRectangles,
    build_surface,
    heights_from_suspension,
)

__all__ = [
    "InvalidSuspension",
    "SingularityHit",
    "OrbitRecord",
    "first_return",
    "flow",
    "flow_batch",
    "record_orbit",
    "record_orbits",
    "GOLDEN",
    "canonical_surface",
    "golden_torus",
    "random_surface",
    "resolve_stratum",
    "stratum_permutation",
    "stratum_surface",
    "rng_stream",
    "split_counts",
    "SurfacePoint",
    "ZipperedRectangles",
    "build_surface",
    "heights_from_suspension",
]
