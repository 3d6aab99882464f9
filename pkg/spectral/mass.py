"""
Spectral-mass upper bounds from twisted L2 norms.

By the spectral identity, the L2 norm of int_0^T exp(-2 pi i lam t) f o phi_t dt
controls the spectral measure of f near lam: with T = 1/(2r),

    sigma_f([lam - r, lam + r]) <= 8 r^2 ||int_0^T exp(-2 pi i lam t) f o phi_t dt||^2.

Norms are estimated by Monte Carlo over start points stratified by rectangle.
"""
import logging
import math
from typing import List, Tuple

import numpy as np

from observables.cellwise import CellwiseObservable
from spectral.models import MonteCarloNorm, SpectralEstimate
from surface.errors import SingularityHit
from surface.sampling import SeedLike, as_generator, split_counts
from surface.zippered import ZipperedRectangles
from twisted.direct import twisted_integrals_batch

logger = logging.getLogger(__name__)

MIN_SAMPLES = 100
MAX_RESAMPLE_ROUNDS = 10
MASS_CONSTANT = 8.0


def stratified_points(s: ZipperedRectangles, n_samples: int,
                      rng: np.random.Generator) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Uniform points with per-rectangle counts proportional to area."""
    counts = split_counts(n_samples, s.rectangle_areas())
    cells = np.repeat(np.arange(s.d), counts)
    xs = rng.uniform(0.0, 1.0, len(cells)) * s.lengths_array[cells]
    ys = rng.uniform(0.0, 1.0, len(cells)) * s.heights_array[cells]
    return cells, xs, ys


def twisted_norm_sample(s: ZipperedRectangles, f: CellwiseObservable, lam: float, T: float,
                        n_samples: int, seed: SeedLike) -> MonteCarloNorm:
    """
    Stratified Monte Carlo estimate of the L2 norm of int_0^T exp(-2 pi i lam t) f o phi_t dt.

    Start points whose orbit meets a cone point are redrawn in the same rectangle.

    Raises:
        ValueError: If n_samples < 100
        SingularityHit: If redrawing keeps hitting cone points
    """
    if n_samples < MIN_SAMPLES:
        raise ValueError(f"n_samples must be at least {MIN_SAMPLES}, got {n_samples}")
    rng = as_generator(seed)
    cells, xs, ys = stratified_points(s, n_samples, rng)
    values, singular = twisted_integrals_batch(s, f, -lam, cells, xs, ys, T)
    resampled = 0
    for _ in range(MAX_RESAMPLE_ROUNDS):
        if not singular.any():
            break
        idx = np.nonzero(singular)[0]
        resampled += len(idx)
        logger.warning(f"Redrawing {len(idx)} start points that met a cone point")
        xs[idx] = rng.uniform(0.0, 1.0, len(idx)) * s.lengths_array[cells[idx]]
        ys[idx] = rng.uniform(0.0, 1.0, len(idx)) * s.heights_array[cells[idx]]
        new_values, new_singular = twisted_integrals_batch(s, f, -lam, cells[idx], xs[idx], ys[idx], T)
        values[idx] = new_values
        singular[idx] = new_singular
    else:
        if singular.any():
            raise SingularityHit(T)

    squares = np.abs(values) ** 2
    areas = s.rectangle_areas()
    total_area = float(areas.sum())
    mean_sq, var = 0.0, 0.0
    populated = [j for j in range(s.d) if np.any(cells == j)]
    weight_sum = float(sum(areas[j] for j in populated))
    for j in populated:
        stratum = squares[cells == j]
        w = areas[j] / weight_sum
        mean_sq += w * float(stratum.mean())
        if len(stratum) > 1:
            var += w ** 2 * float(stratum.var(ddof=1)) / len(stratum)
    mean_sq *= total_area
    se_sq = math.sqrt(var) * total_area
    value = math.sqrt(mean_sq)
    stderr = se_sq / (2.0 * value) if value > 0 else 0.0
    return MonteCarloNorm(value=value, stderr=stderr, n_samples=n_samples, n_resampled=resampled)


def l2_twisted_norm(s: ZipperedRectangles, f: CellwiseObservable, lam: float, T: float,
                    n_samples: int, seed: SeedLike) -> float:
    """
    Monte Carlo L2 norm of int_0^T exp(-2 pi i lam t) f(phi_t x) dt over x.

    Args:
        s: Surface
        f: Observable
        lam: Frequency
        T: Flow time
        n_samples: Start points (at least 100)
        seed: Integer seed or generator

    Returns:
        The root-mean-square (times sqrt(area)) of the twisted integrals
    """
    return twisted_norm_sample(s, f, lam, T, n_samples, seed).value


def mass_upper_from_norm(norm: float, r: float) -> float:
    """8 r^2 norm^2."""
    return MASS_CONSTANT * r * r * norm * norm


def spectral_mass_upper(s: ZipperedRectangles, f: CellwiseObservable, lam: float, r: float,
                        n_samples: int, seed: SeedLike) -> SpectralEstimate:
    """
    Upper bound on sigma_f([lam - r, lam + r]) from the twisted norm at T = 1/(2r).

    Raises:
        ValueError: If r is outside (0, 1/2] or n_samples < 100
    """
    if not 0 < r <= 0.5:
        raise ValueError(f"r must lie in (0, 1/2], got {r}")
    T = 1.0 / (2.0 * r)
    norm = twisted_norm_sample(s, f, lam, T, n_samples, seed)
    mass = mass_upper_from_norm(norm.value, r)
    logger.debug(f"Mass bound at lambda={lam}, r={r}: {mass:.4g}")
    return SpectralEstimate(
        lam=lam,
        r=r,
        mass_upper=mass,
        l2_twisted=norm.value,
        stderr=2.0 * MASS_CONSTANT * r * r * norm.value * norm.stderr,
        n_samples=n_samples,
        T_used=T,
    )


def window_cover_mass(s: ZipperedRectangles, f: CellwiseObservable, low: float, high: float, r: float,
                      n_samples: int, seed: SeedLike) -> List[SpectralEstimate]:
    """
    Mass bounds over consecutive windows of radius r covering [low, high].

    Their sum bounds sigma_f([low, high]) from above.
    """
    if high <= low:
        raise ValueError(f"Empty window [{low}, {high}]")
    count = max(int(math.ceil((high - low) / (2.0 * r) - 1e-9)), 1)
    return [
        spectral_mass_upper(s, f, low + (2 * k + 1) * r, r, n_samples, seed)
        for k in range(count)
    ]
