"""
Consistency checks between twisted-integral growth and spectral mass, and the
weak-mixing exponent they imply.

Upper direction: if the twisted L2 norm grows at most like C T^(1 - a), the
mass of [lam - r, lam + r] is at most 8 C^2 2^(2a - 2) r^(2a).
Growth direction: if the mass decays like r^(2b), the twisted norm stays in
the envelope max(T^(1 - b), sqrt(log T)).
The mass lower bound needs a twisted-integral lower bound that is only
observed, never certified, so it is reported apart and never counted as a
violation.
"""
import logging
import math
from typing import Optional, Sequence

import numpy as np

from observables.cellwise import CellwiseObservable
from spectral.local_dim import fit_local_dimension
from spectral.mass import MASS_CONSTANT, spectral_mass_upper, twisted_norm_sample
from spectral.models import LowerDirection, SandwichReport
from surface.zippered import ZipperedRectangles
from twisted.fitting import fit_power_law

logger = logging.getLogger(__name__)

DEFAULT_SLACK = 2.0
LOWER_TOLERANCE = 0.1


def weak_mixing_bound(alpha: float, beta: float, eta: Optional[float] = None) -> float:
    """
    Admissible decay exponent of the Cesaro-averaged squared correlations.

    From a twisted saving alpha and a growth rate beta of the constants in the
    frequency, any eta with beta * eta < alpha gives min(alpha - beta * eta,
    alpha * eta); the best choice eta = alpha / (alpha + beta) gives
    alpha^2 / (alpha + beta).

    Raises:
        ValueError: If alpha <= 0, beta < 0 or eta is not admissible
    """
    if alpha <= 0 or beta < 0:
        raise ValueError(f"Need alpha > 0 and beta >= 0, got alpha={alpha}, beta={beta}")
    if eta is None:
        return alpha * alpha / (alpha + beta)
    if eta <= 0 or beta * eta >= alpha:
        raise ValueError(f"eta={eta} must be positive with beta * eta < alpha")
    return min(alpha - beta * eta, alpha * eta)


def growth_envelope(T: np.ndarray, beta: float) -> np.ndarray:
    return np.maximum(T ** (1.0 - beta), np.sqrt(np.log(np.maximum(T, math.e))))


def sandwich_check(s: ZipperedRectangles, f: CellwiseObservable, lam: float, r_grid: Sequence[float],
                   T_grid: Sequence[float], n_samples: int = 400, seed: int = 0,
                   slack: float = DEFAULT_SLACK) -> SandwichReport:
    """
    Check both directions of the growth / mass correspondence on measured data.

    Args:
        s: Surface
        f: Observable
        lam: Frequency
        r_grid: Radii in (0, 1/2], at least 6 spanning 2 decades
        T_grid: Increasing times for the twisted-norm growth fit
        n_samples: Start points per norm
        seed: Common seed (every norm uses the same start points)
        slack: Multiplicative tolerance on every bound

    Returns:
        SandwichReport listing the radii and times where a bound fails
    """
    r_grid = np.asarray(r_grid, dtype=float)
    T_grid = np.asarray(T_grid, dtype=float)
    norms = np.array([twisted_norm_sample(s, f, lam, float(T), n_samples, seed).value for T in T_grid])
    masses = np.array([spectral_mass_upper(s, f, lam, float(r), n_samples, seed).mass_upper for r in r_grid])

    growth = fit_power_law(T_grid, norms)
    alpha_minus = float(np.clip(1.0 - growth.slope, 0.0, 1.0))
    growth_constant = float(np.max(norms / T_grid ** (1.0 - alpha_minus)))
    bound = MASS_CONSTANT * growth_constant ** 2 * 2.0 ** (2 * alpha_minus - 2) * r_grid ** (2 * alpha_minus)
    upper_violations = [float(r) for r, m, b in zip(r_grid, masses, bound) if m > slack * b]

    mass_fit = fit_local_dimension(r_grid, masses, lam)
    beta_minus = float(np.clip(mass_fit.slope / 2.0, 0.0, 1.0))
    envelope = growth_envelope(T_grid, beta_minus)
    head = max(len(T_grid) // 2, 1)
    envelope_constant = float(np.max(norms[:head] / envelope[:head]))
    envelope_violations = [
        float(T) for T, n, e in zip(T_grid[head:], norms[head:], envelope[head:])
        if n > slack * envelope_constant * e
    ]
    log_branch = bool(envelope[-1] > T_grid[-1] ** (1.0 - beta_minus))

    lower = LowerDirection(
        constant=float(np.min(norms / T_grid ** (1.0 - alpha_minus))),
        implied_mass_exponent=2.0 * alpha_minus,
        consistent=bool(mass_fit.slope <= 2.0 * alpha_minus + LOWER_TOLERANCE),
    )
    report = SandwichReport(
        lam=lam,
        alpha_minus=alpha_minus,
        growth_constant=growth_constant,
        mass_slope=mass_fit.slope,
        beta_minus=beta_minus,
        log_branch=log_branch,
        envelope_constant=envelope_constant,
        slack=slack,
        r_grid=r_grid.tolist(),
        masses=masses.tolist(),
        T_grid=T_grid.tolist(),
        norms=norms.tolist(),
        upper_violations=upper_violations,
        envelope_violations=envelope_violations,
        lower=lower,
    )
    if report.violations:
        logger.warning(f"Sandwich check at lambda={lam}: {report.violations} violations")
    else:
        logger.info(f"Sandwich check at lambda={lam}: consistent (alpha_minus={alpha_minus:.3f})")
    return report
