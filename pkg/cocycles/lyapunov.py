"""
Monte Carlo estimation of Kontsevich-Zorich exponents.

Each path draws uniform lengths, pushes a random k-frame through the transposed
Zorich matrices and reorthonormalizes it periodically with a QR step; the logs
of the R diagonals, divided by the Teichmuller time reached, estimate the top k
exponents of the cocycle acting on heights.
"""
import logging
import math
from typing import List, Sequence

import numpy as np

from iet.errors import ConnectionDetected
from iet.induction import zorich_move
from iet.permutation import Permutation
from iet.stratum import genus_and_stratum
from iet.transformation import IET, normalize
from cocycles.models import KZSpectrum
from surface.sampling import SeedLike, as_generator, rng_stream

logger = logging.getLogger(__name__)

QR_EVERY = 10
MAX_RESAMPLES = 20
# entries beyond this force an early QR step
OVERFLOW_GUARD = 1e150


def _check_k(p: Permutation, k: int) -> None:
    genus, _ = genus_and_stratum(p)
    if not 1 <= k <= 2 * genus:
        raise ValueError(f"k must be in 1..{2 * genus} for genus {genus}, got {k}")


def _run_frame(p: Permutation, lengths: np.ndarray, frame: np.ndarray, n_zorich: int,
               qr_every: int) -> np.ndarray:
    iet = normalize(IET(p, tuple(lengths)))
    logs = np.zeros(frame.shape[1])
    t = 0.0
    for step in range(n_zorich):
        induced, move = zorich_move(iet)
        t -= math.log(induced.total_length / iet.total_length)
        iet = normalize(induced)
        frame = move.matrix().T @ frame
        if (step + 1) % qr_every == 0 or step == n_zorich - 1 or np.abs(frame).max() > OVERFLOW_GUARD:
            q, r = np.linalg.qr(frame)
            logs += np.log(np.abs(np.diag(r)))
            frame = q
    if t <= 0:
        raise ValueError("Path reached no Teichmuller time")
    return np.sort(logs / t)[::-1]


def path_exponents(p: Permutation, n_zorich: int, k: int, seed: SeedLike,
                   qr_every: int = QR_EVERY) -> np.ndarray:
    """
    Top-k exponent estimates along one random path.

    Lengths that run into a saddle connection are redrawn from the same stream.

    Raises:
        ConnectionDetected: If MAX_RESAMPLES draws in a row hit a connection
    """
    _check_k(p, k)
    rng = as_generator(seed)
    frame, _ = np.linalg.qr(rng.standard_normal((p.d, k)))
    last_error = None
    for attempt in range(MAX_RESAMPLES):
        lengths = rng.dirichlet(np.ones(p.d))
        try:
            return _run_frame(p, lengths, frame, n_zorich, qr_every)
        except ConnectionDetected as e:
            logger.warning(f"Resampling path after connection (attempt {attempt + 1}): {e}")
            last_error = e
    raise last_error


def summarize_exponents(per_path: Sequence[np.ndarray], n_zorich: int) -> KZSpectrum:
    """Mean and standard error across paths, in path order."""
    table = np.vstack([np.asarray(row, dtype=float) for row in per_path])
    n_paths = table.shape[0]
    if n_paths > 1:
        stderr = table.std(axis=0, ddof=1) / math.sqrt(n_paths)
    else:
        stderr = np.zeros(table.shape[1])
    return KZSpectrum(
        exponents=table.mean(axis=0).tolist(),
        stderr=stderr.tolist(),
        n_paths=n_paths,
        n_zorich=n_zorich,
        per_path=table.tolist(),
    )


def kz_exponents(p: Permutation, n_paths: int, n_zorich: int, k: int, seed: int = 0) -> KZSpectrum:
    """
    Top-k Lyapunov exponents per unit Teichmuller time.

    Args:
        p: Irreducible permutation of the stratum
        n_paths: Independent Monte Carlo paths (path i uses stream (seed, i))
        n_zorich: Zorich steps per path
        k: Number of exponents, at most 2g
        seed: Root seed

    Returns:
        KZSpectrum; the top exponent is 1 for every stratum
    """
    if n_paths < 1 or n_zorich < 1:
        raise ValueError("n_paths and n_zorich must be positive")
    per_path: List[np.ndarray] = []
    for i in range(n_paths):
        per_path.append(path_exponents(p, n_zorich, k, rng_stream(seed, i)))
        logger.debug(f"KZ path {i}: {per_path[-1]}")
    spectrum = summarize_exponents(per_path, n_zorich)
    logger.info(f"KZ exponents for {p.to_text()!r}: {spectrum.exponents}")
    return spectrum
