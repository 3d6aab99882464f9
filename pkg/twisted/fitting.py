"""
Power-law fits of twisted integrals over geometric time grids.

The envelope estimator fits the running maximum of |I(T)|, sampled on a grid
oversampled between the user's grid points; the raw estimator fits |I(T)| at
the grid points only.
"""
import logging
from typing import Any, List, Sequence

import numpy as np
from scipy import stats

from observables.cellwise import CellwiseObservable
from surface.flow import record_orbit
from surface.zippered import SurfacePoint, ZipperedRectangles
from twisted.direct import check_finite, prefix_integrals
from twisted.errors import DegenerateData
from twisted.models import ExponentFit
from twisted.product_flow import FourierModes, product_flow_mean

logger = logging.getLogger(__name__)

MIN_GRID_POINTS = 8
FLOOR = 1e-14
OVERSAMPLE = 16


def validate_geometric_grid(T_grid: Sequence[float], min_points: int = MIN_GRID_POINTS) -> np.ndarray:
    """
    Raises:
        DegenerateData: If the grid is too short, not increasing or not geometric
    """
    grid = np.asarray(T_grid, dtype=float)
    if len(grid) < min_points:
        raise DegenerateData(f"Need at least {min_points} grid points, got {len(grid)}")
    if np.any(grid <= 0) or np.any(np.diff(grid) <= 0):
        raise DegenerateData("Grid must be positive and strictly increasing")
    ratios = grid[1:] / grid[:-1]
    if np.max(np.abs(ratios / ratios[0] - 1.0)) > 1e-6:
        raise DegenerateData("Grid must be geometric")
    return grid


def fine_grid(grid: np.ndarray, oversample: int = OVERSAMPLE) -> np.ndarray:
    """Geometric grid with ``oversample`` steps per interval, containing every grid point."""
    return np.geomspace(grid[0], grid[-1], (len(grid) - 1) * oversample + 1)


def envelope_at(grid: np.ndarray, fine: np.ndarray, fine_values: np.ndarray) -> np.ndarray:
    """Running maximum of fine_values, read at the grid points."""
    running = np.maximum.accumulate(np.abs(fine_values))
    idx = np.clip(np.searchsorted(fine, grid * (1 + 1e-12), side="right") - 1, 0, len(fine) - 1)
    return running[idx]


def fit_power_law(x: Sequence[float], y: Sequence[float]) -> Any:
    """
    Least-squares line through (log x, log y).

    Raises:
        DegenerateData: If every y is below the floor
    """
    x, y = np.asarray(x, dtype=float), np.asarray(y, dtype=float)
    if np.all(y < FLOOR):
        raise DegenerateData(f"All values below {FLOOR}; nothing to fit")
    return stats.linregress(np.log(x), np.log(np.maximum(y, FLOOR)))


def _exponent_fit(grid: np.ndarray, magnitudes: np.ndarray, envelope: bool, raw: np.ndarray) -> ExponentFit:
    result = fit_power_law(grid, magnitudes)
    r_squared = float(np.clip(result.rvalue ** 2, 0.0, 1.0))
    stderr = float(result.stderr) if np.isfinite(result.stderr) else 0.0
    return ExponentFit(
        exponent=float(result.slope),
        intercept=float(result.intercept),
        r_squared=r_squared,
        stderr=stderr,
        T_grid=grid.tolist(),
        values=magnitudes.tolist(),
        re=raw.real.tolist(),
        im=raw.imag.tolist(),
        envelope=envelope,
    )


def twisted_sweep(s: ZipperedRectangles, f: CellwiseObservable, lam: float, x0: SurfacePoint,
                  times: Sequence[float]) -> np.ndarray:
    """I(T) at every T in ``times``, from one recorded orbit."""
    times = np.asarray(times, dtype=float)
    check_finite(lam, float(times.max()))
    record = record_orbit(s, x0, float(times.max()))
    return prefix_integrals(s, f, lam, record, times)


def sweep_and_fit(s: ZipperedRectangles, f: CellwiseObservable, lam: float, x0: SurfacePoint,
                  T_grid: Sequence[float], envelope: bool = True) -> ExponentFit:
    """
    Fit |I(T)| <= C T^exponent over a geometric grid.

    Args:
        s: Surface
        f: Observable
        lam: Frequency (0 gives the untwisted Birkhoff integral)
        x0: Start point
        T_grid: Geometric grid with at least 8 points
        envelope: Fit the running maximum instead of the raw values

    Returns:
        ExponentFit; 1 - exponent is the measured power saving

    Raises:
        DegenerateData: If the grid is invalid or every |I(T)| is below 1e-14
    """
    grid = validate_geometric_grid(T_grid)
    if envelope:
        fine = fine_grid(grid)
        values = twisted_sweep(s, f, lam, x0, np.concatenate([fine, grid]))
        raw = values[len(fine):]
        magnitudes = envelope_at(grid, fine, values[:len(fine)])
    else:
        raw = twisted_sweep(s, f, lam, x0, grid)
        magnitudes = np.abs(raw)
    fit = _exponent_fit(grid, magnitudes, envelope, raw)
    logger.info(f"Twisted sweep at lambda={lam}: exponent {fit.exponent:.4f} (r^2={fit.r_squared:.3f})")
    return fit


def product_deviation_sweep(s: ZipperedRectangles, F_modes: FourierModes, lam: float, x0: SurfacePoint,
                            theta: float, times: Sequence[float]) -> np.ndarray:
    """Product-flow integral minus T times the mean, at every T in ``times``."""
    times = np.asarray(times, dtype=float)
    check_finite(lam, float(times.max()))
    record = record_orbit(s, x0, float(times.max()))
    total = np.zeros(len(times), dtype=complex)
    for n, f_n in F_modes:
        total += np.exp(2j * np.pi * n * theta) * prefix_integrals(s, f_n, n * lam, record, times)
    return total - times * product_flow_mean(s, F_modes)


def fit_product_deviation(s: ZipperedRectangles, F_modes: FourierModes, lam: float, x0: SurfacePoint,
                          theta: float, T_grid: Sequence[float]) -> ExponentFit:
    """Envelope fit of the product-flow deviation; 1 - exponent is its power saving."""
    grid = validate_geometric_grid(T_grid)
    fine = fine_grid(grid)
    values = product_deviation_sweep(s, F_modes, lam, x0, theta, np.concatenate([fine, grid]))
    fit = _exponent_fit(grid, envelope_at(grid, fine, values[:len(fine)]), True, values[len(fine):])
    logger.info(f"Product deviation at lambda={lam}, theta={theta}: exponent {fit.exponent:.4f}")
    return fit


def geometric_grid(start: float, stop: float, points: int) -> List[float]:
    return np.geomspace(start, stop, points).tolist()
