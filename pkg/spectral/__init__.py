"""
Spectral measures of translation flows: mass bounds near a frequency, local
dimensions, correlation decay and the cross-checks between them.
"""
from spectral.decay import correlation_decay, correlation_series, decay_time_grid, quadrature_nodes
from spectral.errors import QuadratureBudgetExceeded
from spectral.fft_oracle import autocorrelation, hann_window, spectral_density, window_mass
from spectral.local_dim import fit_local_dimension, local_dimension, validate_r_grid
from spectral.mass import (
    l2_twisted_norm,
    mass_upper_from_norm,
    spectral_mass_upper,
    stratified_points,
    twisted_norm_sample,
    window_cover_mass,
)
from spectral.models import (
    DecayCurve,
    LocalDimensionFit,
    LowerDirection,
    MonteCarloNorm,
    QuadratureSpec,
    SandwichReport,
    SpectralEstimate,
)
from spectral.sandwich import growth_envelope, sandwich_check, weak_mixing_bound

__all__ = [
    "DecayCurve",
    "LocalDimensionFit",
    "LowerDirection",
    "MonteCarloNorm",
    "QuadratureBudgetExceeded",
    "QuadratureSpec",
    "SandwichReport",
    "SpectralEstimate",
    "autocorrelation",
    "correlation_decay",
    "correlation_series",
    "decay_time_grid",
    "fit_local_dimension",
    "growth_envelope",
    "hann_window",
    "l2_twisted_norm",
    "local_dimension",
    "mass_upper_from_norm",
    "quadrature_nodes",
    "sandwich_check",
    "spectral_density",
    "spectral_mass_upper",
    "stratified_points",
    "twisted_norm_sample",
    "validate_r_grid",
    "weak_mixing_bound",
    "window_cover_mass",
]
