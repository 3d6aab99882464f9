"""
Correlations <f o phi_t, g> and their Cesaro-averaged squares.

For the start point (j, x, 0) of rectangle j the y-integral of a term of g is
a difference of twisted prefix integrals of f at frequency -n/h_j:

    int_0^h f(phi_{t+y}(x)) exp(-2 pi i n y / h) dy = exp(2 pi i n t / h) (J(t + h) - J(t)),

so y is integrated exactly and only x needs quadrature (composite Gauss-Legendre).
"""
import logging
from typing import Optional, Sequence

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy import integrate, stats

from observables.cellwise import CellwiseObservable, inner_product, mean
from spectral.errors import QuadratureBudgetExceeded
from spectral.models import DecayCurve, QuadratureSpec
from surface.flow import record_orbit, record_orbits
from surface.zippered import SurfacePoint, ZipperedRectangles
from twisted.direct import prefix_integrals
from twisted.errors import DegenerateData
from twisted.fitting import FLOOR

logger = logging.getLogger(__name__)

ZERO_MEAN_TOLERANCE = 1e-9
# nudge applied to quadrature nodes whose orbit meets a cone point
NODE_NUDGE = 1e-9


def quadrature_nodes(s: ZipperedRectangles, cell: int, spec: QuadratureSpec):
    """Composite Gauss-Legendre abscissae and weights across one rectangle."""
    nodes, weights = leggauss(spec.nodes_per_panel)
    edges = np.linspace(0.0, s.lengths_array[cell], spec.panels_per_cell + 1)
    mid = 0.5 * (edges[1:] + edges[:-1])[:, None]
    half = 0.5 * np.diff(edges)[:, None]
    return (mid + half * nodes).ravel(), (half * weights).ravel()


def estimated_crossings(s: ZipperedRectangles, g: CellwiseObservable, t_max: float, spec: QuadratureSpec) -> float:
    cells = {t.cell for t in g.terms}
    n_orbits = len(cells) * spec.panels_per_cell * spec.nodes_per_panel
    heights = s.heights_array
    return n_orbits * (t_max + heights.max()) / heights.min()


def correlation_series(s: ZipperedRectangles, f: CellwiseObservable, g: CellwiseObservable,
                       times: Sequence[float], quadrature: Optional[QuadratureSpec] = None) -> np.ndarray:
    """
    <f o phi_t, g> = integral of f(phi_t p) conj(g(p)) over the surface, for every t.

    Raises:
        QuadratureBudgetExceeded: If the orbits would need more crossings than allowed
        ValueError: On negative times
    """
    spec = quadrature or QuadratureSpec()
    times = np.asarray(times, dtype=float)
    if np.any(times < 0):
        raise ValueError("Correlation times must be non-negative")
    t_max = float(times.max()) if len(times) else 0.0
    estimate = estimated_crossings(s, g, t_max, spec)
    if estimate > spec.max_crossings:
        raise QuadratureBudgetExceeded(estimate, spec.max_crossings)

    result = np.zeros(len(times), dtype=complex)
    for j in sorted({t.cell for t in g.terms}):
        g_terms = g.terms_on(j)
        length, h = s.lengths_array[j], s.heights_array[j]
        xs, wx = quadrature_nodes(s, j, spec)
        both = np.concatenate([times, times + h])
        for a in range(0, len(xs), spec.orbit_chunk):
            chunk = xs[a:a + spec.orbit_chunk]
            records, singular = record_orbits(s, np.full(len(chunk), j), chunk, np.zeros(len(chunk)),
                                              t_max + h, raise_on_singular=False)
            for i, record in enumerate(records):
                x = chunk[i]
                if singular[i]:
                    x = x + NODE_NUDGE * length
                    logger.warning(f"Quadrature node {chunk[i]} on cell {j} met a cone point; nudged to {x}")
                    record = record_orbit(s, SurfacePoint(j, x, 0.0), t_max + h)
                for term in g_terms:
                    prefix = prefix_integrals(s, f, -term.n / h, record, both)
                    block = np.exp(2j * np.pi * np.mod(term.n * times / h, 1.0)) * (prefix[len(times):] - prefix[:len(times)])
                    weight = wx[a + i] * np.conj(term.c) * np.exp(-2j * np.pi * term.m * x / length)
                    result += weight * block
        logger.debug(f"Correlation quadrature done on cell {j}")
    return result


def decay_time_grid(T_grid: np.ndarray, samples_per_interval: int) -> np.ndarray:
    """Uniform samples on [0, T_1] and on every [T_k, T_k+1], sharing endpoints."""
    edges = np.concatenate([[0.0], T_grid])
    pieces = [np.linspace(a, b, samples_per_interval + 1)[:-1] for a, b in zip(edges[:-1], edges[1:])]
    return np.concatenate(pieces + [[T_grid[-1]]])


def correlation_decay(s: ZipperedRectangles, f: CellwiseObservable, g: CellwiseObservable,
                      T_grid: Sequence[float], quadrature: Optional[QuadratureSpec] = None) -> DecayCurve:
    """
    Cesaro averages (1/T) int_0^T |<f o phi_t, g>|^2 dt and their power-law fit.

    Args:
        s: Surface
        f: Zero-mean observable
        g: Observable
        T_grid: Increasing positive times
        quadrature: Resolution and budget

    Returns:
        DecayCurve; the exponent is None when the curve vanishes identically

    Raises:
        ValueError: If f does not have zero mean
        DegenerateData: If T_grid is not positive and increasing
        QuadratureBudgetExceeded: If the budget is too small for max(T_grid)
    """
    spec = quadrature or QuadratureSpec()
    grid = np.asarray(T_grid, dtype=float)
    if len(grid) == 0 or np.any(grid <= 0) or np.any(np.diff(grid) <= 0):
        raise DegenerateData("T grid must be positive and strictly increasing")
    scale = abs(inner_product(f, f, s)) ** 0.5 + 1.0
    if abs(mean(f, s)) > ZERO_MEAN_TOLERANCE * scale:
        raise ValueError(f"f must have zero mean, got mean {mean(f, s)}")

    times = decay_time_grid(grid, spec.samples_per_interval)
    squares = np.abs(correlation_series(s, f, g, times, spec)) ** 2
    cumulative = integrate.cumulative_trapezoid(squares, times, initial=0.0)
    idx = np.searchsorted(times, grid)
    values = np.maximum(cumulative[idx] / grid, 0.0)
    curve = DecayCurve(T_grid=grid.tolist(), values=values.tolist(),
                       inner_product_sq=abs(inner_product(f, g, s)) ** 2)
    if len(grid) < 3 or np.all(values < FLOOR):
        logger.info("Correlation curve vanishes or is too short to fit")
        return curve

    result = stats.linregress(np.log(grid), np.log(np.maximum(values, FLOOR)))
    stderr = float(result.stderr) if np.isfinite(result.stderr) else 0.0
    half = float(stats.t.ppf(0.975, len(grid) - 2)) * stderr
    curve.exponent = float(result.slope)
    curve.intercept = float(result.intercept)
    curve.ci_low = curve.exponent - half
    curve.ci_high = curve.exponent + half
    logger.info(f"Correlation decay exponent {curve.exponent:.4f} [{curve.ci_low:.4f}, {curve.ci_high:.4f}]")
    return curve
