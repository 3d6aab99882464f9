"""
Interval exchange transformations with Rauzy-Veech induction and Zorich acceleration.
"""
from iet.errors import ConnectionDetected, DiscontinuityHit, ReduciblePermutation
from iet.induction import RauzyStep, StepType, ZorichMove, rauzy_step, zorich_move, zorich_step
from iet.permutation import Permutation
from iet.stratum import genus_and_stratum, singularity_profile, stratum_name, twisted_cohomology_dimension
from iet.transformation import IET, TIE_TOLERANCE, apply_iet, make_iet, normalize

__all__ = [
    "ConnectionDetected",
    "DiscontinuityHit",
    "ReduciblePermutation",
    "Permutation",
    "IET",
    "TIE_TOLERANCE",
    "apply_iet",
    "make_iet",
    "normalize",
    "RauzyStep",
    "StepType",
    "ZorichMove",
    "rauzy_step",
    "zorich_move",
    "zorich_step",
    "genus_and_stratum",
    "singularity_profile",
    "stratum_name",
    "twisted_cohomology_dimension",
]
