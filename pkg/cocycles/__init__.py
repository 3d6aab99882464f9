"""
The Zorich cocycle, its twisted version at a frequency, Kontsevich-Zorich
exponents and the growth-rate proxy of the twisted cocycle.
"""
from cocycles.gap import checkpoint_steps, gap_estimate, gap_sweep
from cocycles.lyapunov import kz_exponents, path_exponents, summarize_exponents
from cocycles.models import GapEstimate, KZSpectrum
from cocycles.path import CocyclePath, build_path, default_heights
from cocycles.twisted_matrix import (
    geometric_phase_sum,
    twisted_matrix,
    twisted_matrix_from_phases,
    word_phase_terms,
)

__all__ = [
    "CocyclePath",
    "GapEstimate",
    "KZSpectrum",
    "build_path",
    "checkpoint_steps",
    "default_heights",
    "gap_estimate",
    "gap_sweep",
    "geometric_phase_sum",
    "kz_exponents",
    "path_exponents",
    "summarize_exponents",
    "twisted_matrix",
    "twisted_matrix_from_phases",
    "word_phase_terms",
]
