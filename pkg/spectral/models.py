"""
Pydantic models for spectral estimates, decay curves and consistency reports.
"""
from typing import List, Optional

from pydantic import BaseModel, Field


class QuadratureSpec(BaseModel):
    """Spatial and temporal resolution of correlation integrals."""
    panels_per_cell: int = Field(default=16, ge=1, description="Composite panels across each rectangle")
    nodes_per_panel: int = Field(default=4, ge=1, le=64, description="Gauss-Legendre nodes per panel")
    samples_per_interval: int = Field(default=128, ge=2, description="Uniform time samples between grid points")
    orbit_chunk: int = Field(default=32, ge=1, description="Orbits recorded together")
    max_crossings: float = Field(default=2e8, gt=0, description="Budget on recorded crossings")


class MonteCarloNorm(BaseModel):
    """Root-mean-square of a twisted integral over random start points."""
    value: float = Field(ge=0)
    stderr: float = Field(ge=0)
    n_samples: int = Field(ge=1)
    n_resampled: int = Field(default=0, ge=0, description="Start points redrawn after hitting a cone point")


class SpectralEstimate(BaseModel):
    """Upper bound on the spectral mass of [lam - r, lam + r]."""
    lam: float
    r: float = Field(gt=0, le=0.5)
    mass_upper: float = Field(ge=0, description="8 r^2 l2_twisted^2")
    l2_twisted: float = Field(ge=0)
    stderr: float = Field(default=0.0, ge=0, description="Standard error of mass_upper")
    n_samples: int = Field(ge=1)
    T_used: float = Field(gt=0, description="1 / (2 r)")


class LocalDimensionFit(BaseModel):
    """Slope of log mass against log r, with a 95% confidence band."""
    lam: float
    slope: float
    intercept: float
    stderr: float = Field(ge=0)
    ci_low: float
    ci_high: float
    r_grid: List[float]
    masses: List[float]


class DecayCurve(BaseModel):
    """(1/T) int_0^T |<f o phi_t, g>|^2 dt on a grid of T."""
    T_grid: List[float]
    values: List[float]
    inner_product_sq: float = Field(ge=0, description="|<f, g>|^2, the T -> 0 limit")
    exponent: Optional[float] = Field(default=None, description="Fitted power of T, None if the curve vanishes")
    intercept: Optional[float] = None
    ci_low: Optional[float] = None
    ci_high: Optional[float] = None

    @property
    def decays(self) -> bool:
        """True when the whole 95% band lies below zero."""
        return self.ci_high is not None and self.ci_high < 0


class LowerDirection(BaseModel):
    """The mass lower bound, valid only under a twisted-integral lower bound."""
    status: str = "conditional"
    constant: float = Field(ge=0, description="min over the grid of norm / T^(1 - alpha_minus)")
    implied_mass_exponent: float = Field(description="2 alpha_minus")
    consistent: bool = Field(description="Measured mass slope does not exceed the implied exponent plus tolerance")


class SandwichReport(BaseModel):
    """Both directions of the twisted-growth / spectral-mass correspondence checked on data."""
    lam: float
    alpha_minus: float = Field(description="1 - fitted growth exponent of the twisted L2 norm")
    growth_constant: float = Field(ge=0)
    mass_slope: float
    beta_minus: float = Field(description="Half the mass slope, clipped to [0, 1]")
    log_branch: bool = Field(description="True when the sqrt(log T) envelope dominates")
    envelope_constant: float = Field(ge=0)
    slack: float = Field(gt=0)
    r_grid: List[float]
    masses: List[float]
    T_grid: List[float]
    norms: List[float]
    upper_violations: List[float] = Field(default_factory=list, description="r values where the mass bound fails")
    envelope_violations: List[float] = Field(default_factory=list, description="T values outside the growth envelope")
    lower: LowerDirection

    @property
    def violations(self) -> int:
        return len(self.upper_violations) + len(self.envelope_violations)
