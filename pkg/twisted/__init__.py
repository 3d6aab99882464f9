"""
Twisted ergodic integrals: direct and renormalized evaluation, orbit
decomposition by Teichmuller scales, product-flow reduction and exponent fits.
"""
from twisted.chop import chop_decompose, scale_excess, twisted_trace_over_segments
from twisted.direct import prefix_integrals, twisted_integral_direct, twisted_integrals_batch
from twisted.errors import DegenerateData, EmptyTimes, NonFiniteInput, UnsupportedObservable
from twisted.fitting import (
    fit_power_law,
    fit_product_deviation,
    geometric_grid,
    sweep_and_fit,
    twisted_sweep,
)
from twisted.models import ChopDecomposition, ChopSegment, ExponentFit, TwistedTrace
from twisted.product_flow import (
    product_flow_deviation,
    product_flow_integral,
    product_flow_mean,
    product_flow_quadrature,
)
from twisted.renormalized import RenormalizationLadder, twisted_sum_renormalized

__all__ = [
    "chop_decompose",
    "scale_excess",
    "twisted_trace_over_segments",
    "prefix_integrals",
    "twisted_integral_direct",
    "twisted_integrals_batch",
    "DegenerateData",
    "EmptyTimes",
    "NonFiniteInput",
    "UnsupportedObservable",
    "fit_power_law",
    "fit_product_deviation",
    "geometric_grid",
    "sweep_and_fit",
    "twisted_sweep",
    "ChopDecomposition",
    "ChopSegment",
    "ExponentFit",
    "TwistedTrace",
    "product_flow_deviation",
    "product_flow_integral",
    "product_flow_mean",
    "product_flow_quadrature",
    "RenormalizationLadder",
    "twisted_sum_renormalized",
]
