"""
Norms of cellwise observables: L2, a sup bound, and the weighted Sobolev proxy.
"""
import math

import numpy as np
from pydantic import BaseModel, Field

from observables.cellwise import CellwiseObservable, inner_product
from surface.zippered import ZipperedRectangles


class NormReport(BaseModel):
    """Norm summary of one observable on one surface."""
    l2_norm: float = Field(ge=0, description="Square root of <f, f>")
    sup_norm_bound: float = Field(ge=0, description="Max over cells of the sum of coefficient moduli")
    sobolev1_proxy: float = Field(ge=0, description="Square root of |f|^2 + |S f|^2 + |T f|^2 summed cellwise")


def l2_norm(f: CellwiseObservable, s: ZipperedRectangles) -> float:
    return math.sqrt(max(inner_product(f, f, s).real, 0.0))


def sup_norm_bound(f: CellwiseObservable) -> float:
    """Triangle-inequality bound on sup |f|."""
    per_cell = np.zeros(f.d)
    for t in f.terms:
        per_cell[t.cell] += abs(t.c)
    return float(per_cell.max()) if f.d else 0.0


def sobolev1_proxy(f: CellwiseObservable, s: ZipperedRectangles) -> NormReport:
    """
    Cellwise first-order Sobolev norm, S = d/dy along the flow and T = d/dx.

    Args:
        f: Observable
        s: Surface

    Returns:
        NormReport with the L2 norm, the sup bound and the Sobolev proxy
    """
    fx, fy = f.derivative(s, "x"), f.derivative(s, "y")
    l2_sq = max(inner_product(f, f, s).real, 0.0)
    total = l2_sq + max(inner_product(fx, fx, s).real, 0.0) + max(inner_product(fy, fy, s).real, 0.0)
    return NormReport(
        l2_norm=math.sqrt(l2_sq),
        sup_norm_bound=sup_norm_bound(f),
        sobolev1_proxy=math.sqrt(total),
    )
