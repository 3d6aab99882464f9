"""
The frequency-twisted transfer matrices of a Zorich move.

B_lambda[b, a] sums exp(2 pi i lambda * prefix) over the occurrences of the
old letter b in the return word of the new letter a, the prefix being the
total height of the letters visited before that occurrence. Repeated letters
are summed as geometric series, so a run of any length costs O(1).
"""
import math
from typing import Dict, List

import numpy as np

from iet.induction import Run, ZorichMove


def geometric_phase_sum(theta: float, count: int) -> complex:
    """sum_{i < count} exp(2 pi i theta i)."""
    if count <= 0:
        return 0j
    if count == 1:
        return 1.0 + 0j
    reduced = theta - round(theta)
    if reduced == 0.0:
        return complex(count)
    half = math.pi * reduced
    ratio = math.sin(half * count) / math.sin(half)
    angle = half * (count - 1)
    return complex(math.cos(angle) * ratio, math.sin(angle) * ratio)


def word_phase_terms(runs: List[Run], phases: np.ndarray):
    """
    Yield (letter, weight) for every run of a return word.

    ``phases`` holds lambda * height (in cycles) of each old letter; the weight
    of a run is exp(2 pi i prefix) times the geometric sum over its repetitions.
    """
    prefix = 0.0
    for letter, count in runs:
        theta = float(phases[letter])
        weight = np.exp(2j * np.pi * (prefix % 1.0)) * geometric_phase_sum(theta, count)
        yield letter, weight
        prefix += count * theta


def twisted_matrix_from_phases(move: ZorichMove, phases: np.ndarray) -> np.ndarray:
    """B_lambda for phases = lambda * heights_before (taken mod 1 by the caller if needed)."""
    d = move.d
    b = np.zeros((d, d), dtype=complex)
    words: Dict[int, List[Run]] = move.return_words()
    for a in range(d):
        for letter, weight in word_phase_terms(words[a], phases):
            b[letter, a] += weight
    return b


def twisted_matrix(move: ZorichMove, heights_before: np.ndarray, lam: float) -> np.ndarray:
    """
    Twisted matrix of a Zorich move at frequency lam.

    Args:
        move: The move (its return words define the matrix)
        heights_before: Heights of the old letters
        lam: Frequency; lam = 0 gives the untwisted integer matrix

    Returns:
        Complex d x d matrix with |B_lambda| <= B entrywise
    """
    phases = lam * np.asarray(heights_before, dtype=float)
    return twisted_matrix_from_phases(move, phases)
