"""
Spectral-gap proxy of the twisted cocycle.

Along one Zorich path the twisted matrices are built from the toral phases
lambda * h mod 1, iterated as theta' = B^T theta mod 1 so heights never
overflow. The product is renormalized by its largest entry at every step.
"""
import logging
import math
from typing import List, Optional, Sequence

import numpy as np

from iet.permutation import Permutation
from cocycles.models import GapEstimate
from cocycles.path import CocyclePath, build_path
from cocycles.twisted_matrix import twisted_matrix_from_phases

logger = logging.getLogger(__name__)

N_CHECKPOINTS = 8


def checkpoint_steps(n_steps: int, n_checkpoints: int = N_CHECKPOINTS) -> List[int]:
    if n_steps <= 0:
        return []
    steps = np.linspace(n_steps / n_checkpoints, n_steps, n_checkpoints)
    return sorted({max(int(round(s)), 1) for s in steps})


def gap_estimate(path: CocyclePath, lam: float, n_checkpoints: int = N_CHECKPOINTS) -> GapEstimate:
    """
    alpha_hat = 1 - log||B_lambda(n)|| / t_n along a recorded path.

    The operator 2-norm is reported; log of the entry-modulus sum is kept as a
    cheap monitor. The band spans the alpha_hat values at the checkpoints in
    the second half of the path.
    """
    if not math.isfinite(lam):
        raise ValueError(f"lambda must be finite, got {lam!r}")
    d = path.permutation.d
    theta = np.mod(lam * path.heights[0], 1.0)
    product = np.eye(d, dtype=complex)
    log_scale = 0.0
    marks = set(checkpoint_steps(path.n_steps, n_checkpoints))
    checkpoints = []
    log_norm = 0.0
    log_entry_sum = 0.0
    for i, move in enumerate(path.moves, start=1):
        product = product @ twisted_matrix_from_phases(move, theta)
        theta = np.mod(move.matrix().T @ theta, 1.0)
        top = np.abs(product).max()
        if top > 0:
            product /= top
            log_scale += math.log(top)
        if i in marks:
            sigma = np.linalg.svd(product, compute_uv=False)[0]
            log_norm = log_scale + math.log(max(sigma, 1e-300))
            log_entry_sum = log_scale + math.log(max(np.abs(product).sum(), 1e-300))
            t_i = path.times[i]
            checkpoints.append((i, 1.0 - log_norm / t_i if t_i > 0 else 0.0))
        if i % 1000 == 0:
            logger.debug(f"Gap sweep lambda={lam}: step {i}")

    if not checkpoints:
        return GapEstimate(lam=lam, alpha_hat=0.0, n_steps=0, t_n=0.0, log_norm=0.0, log_entry_sum=0.0,
                           band_low=0.0, band_high=0.0, checkpoints=[])
    late = [a for step, a in checkpoints if step >= path.n_steps / 2] or [checkpoints[-1][1]]
    return GapEstimate(
        lam=lam,
        alpha_hat=checkpoints[-1][1],
        n_steps=path.n_steps,
        t_n=path.times[-1],
        log_norm=log_norm,
        log_entry_sum=log_entry_sum,
        band_low=min(late),
        band_high=max(late),
        checkpoints=checkpoints,
    )


def gap_sweep(p: Permutation, lengths: Sequence[float], lambda_grid: Sequence[float], n_zorich: int,
              heights: Optional[Sequence[float]] = None,
              n_checkpoints: int = N_CHECKPOINTS) -> List[GapEstimate]:
    """
    alpha_hat at every frequency of the grid, all along the same path.

    Args:
        p: Irreducible permutation
        lengths: Keane-generic lengths (rescaled to total length 1)
        lambda_grid: Frequencies; 0 gives the untwisted cocycle
        n_zorich: Zorich steps
        heights: Heights over the rescaled lengths (canonical suspension if omitted)
        n_checkpoints: Convergence checkpoints per frequency

    Returns:
        One GapEstimate per grid point, in grid order

    Raises:
        ConnectionDetected: If the lengths hit a saddle connection
    """
    path = build_path(p, lengths, n_zorich, heights)
    logger.info(f"Gap sweep: {len(lambda_grid)} frequencies, t_n = {path.times[-1]:.2f}")
    return [gap_estimate(path, float(lam), n_checkpoints) for lam in lambda_grid]
