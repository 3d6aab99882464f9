"""
Lower local dimension of spectral measures from mass bounds on shrinking windows.
"""
import logging
from typing import Sequence

import numpy as np
from scipy import stats

from observables.cellwise import CellwiseObservable
from spectral.mass import spectral_mass_upper
from spectral.models import LocalDimensionFit
from surface.sampling import SeedLike
from surface.zippered import ZipperedRectangles
from twisted.errors import DegenerateData
from twisted.fitting import FLOOR

logger = logging.getLogger(__name__)

MIN_POINTS = 6
MIN_DECADES = 2.0


def validate_r_grid(r_grid: Sequence[float]) -> np.ndarray:
    """
    Raises:
        DegenerateData: With fewer than 6 radii or a span below two decades
    """
    grid = np.asarray(r_grid, dtype=float)
    if len(grid) < MIN_POINTS:
        raise DegenerateData(f"Need at least {MIN_POINTS} radii, got {len(grid)}")
    if np.any(grid <= 0):
        raise DegenerateData("Radii must be positive")
    if np.log10(grid.max() / grid.min()) < MIN_DECADES - 1e-9:
        raise DegenerateData(f"Radii must span at least {MIN_DECADES:g} decades")
    return grid


def fit_local_dimension(r_grid: Sequence[float], masses: Sequence[float], lam: float = 0.0) -> LocalDimensionFit:
    """
    Regression of log mass on log r with a 95% t-interval on the slope.

    Raises:
        DegenerateData: On an invalid grid or all masses below 1e-14
    """
    grid = validate_r_grid(r_grid)
    values = np.asarray(masses, dtype=float)
    if np.all(values < FLOOR):
        raise DegenerateData("All masses vanish; the slope is undefined")
    result = stats.linregress(np.log(grid), np.log(np.maximum(values, FLOOR)))
    stderr = float(result.stderr) if np.isfinite(result.stderr) else 0.0
    half = float(stats.t.ppf(0.975, len(grid) - 2)) * stderr
    return LocalDimensionFit(
        lam=lam,
        slope=float(result.slope),
        intercept=float(result.intercept),
        stderr=stderr,
        ci_low=float(result.slope) - half,
        ci_high=float(result.slope) + half,
        r_grid=grid.tolist(),
        masses=values.tolist(),
    )


def local_dimension(s: ZipperedRectangles, f: CellwiseObservable, lam: float, r_grid: Sequence[float],
                    n_samples: int, seed: SeedLike) -> LocalDimensionFit:
    """
    Slope of log sigma_f([lam - r, lam + r]) (upper bound) against log r.

    Every radius uses the same start points (same seed), so the slope is not
    blurred by independent sampling noise.

    Args:
        s: Surface
        f: Observable
        lam: Frequency
        r_grid: Geometric radii in (0, 1/2], at least 6 spanning 2 decades
        n_samples: Start points per radius
        seed: Integer seed

    Raises:
        DegenerateData: On an invalid grid
    """
    grid = validate_r_grid(r_grid)
    masses = [spectral_mass_upper(s, f, lam, float(r), n_samples, seed).mass_upper for r in grid]
    fit = fit_local_dimension(grid, masses, lam)
    logger.info(f"Local dimension at lambda={lam}: {fit.slope:.4f} [{fit.ci_low:.4f}, {fit.ci_high:.4f}]")
    return fit
