"""
Ready-made observables for experiments and tests.
"""
from typing import List

import numpy as np

from observables.cellwise import CellwiseObservable, Term, centered, constant
from surface.sampling import SeedLike, as_generator
from surface.zippered import ZipperedRectangles


def constant_observable(s: ZipperedRectangles, value: complex = 1.0) -> CellwiseObservable:
    return constant(s.d, value)


def random_cellwise_constant(s: ZipperedRectangles, seed: SeedLike, zero_mean: bool = True) -> CellwiseObservable:
    """Gaussian value on each rectangle, optionally centered."""
    rng = as_generator(seed)
    values = rng.standard_normal(s.d)
    f = CellwiseObservable(s.d, tuple(Term(j, 0.0, 0.0, values[j]) for j in range(s.d)))
    return centered(f, s) if zero_mean else f


def random_trigonometric(s: ZipperedRectangles, seed: SeedLike, max_mode: int = 2,
                         terms_per_cell: int = 3, zero_mean: bool = True) -> CellwiseObservable:
    """Random integer-mode trigonometric polynomial on every rectangle."""
    rng = as_generator(seed)
    terms: List[Term] = []
    for j in range(s.d):
        modes = rng.integers(-max_mode, max_mode + 1, size=(terms_per_cell, 2))
        coeffs = rng.standard_normal(terms_per_cell) + 1j * rng.standard_normal(terms_per_cell)
        for (m, n), c in zip(modes, coeffs):
            terms.append(Term(j, float(m), float(n), c / terms_per_cell))
    f = CellwiseObservable(s.d, tuple(terms))
    return centered(f, s) if zero_mean else f


def horizontal_character(s: ZipperedRectangles, k: float, vertical_frequency: float = 0.0) -> CellwiseObservable:
    """
    exp(2 pi i (k X + nu y)) with X the base coordinate of the surface.

    On a torus with rotation number g and unit heights, k integer and
    nu = k * g give an eigenfunction: f o phi_t = exp(2 pi i nu t) f.
    """
    terms = []
    for j in range(s.d):
        c = np.exp(2j * np.pi * k * s.top_starts[j])
        terms.append(Term(j, k * s.lengths_array[j], vertical_frequency * s.heights_array[j], c))
    return CellwiseObservable(s.d, tuple(terms))
