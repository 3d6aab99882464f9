"""
Test functions on zippered rectangles with exact cellwise integrals.
"""
from observables.cellwise import (
    CellwiseObservable,
    Term,
    centered,
    constant,
    cycle_average,
    inner_product,
    mean,
)
from observables.library import (
    constant_observable,
    horizontal_character,
    random_cellwise_constant,
    random_trigonometric,
)
from observables.norms import NormReport, l2_norm, sobolev1_proxy, sup_norm_bound

__all__ = [
    "CellwiseObservable",
    "Term",
    "centered",
    "constant",
    "cycle_average",
    "inner_product",
    "mean",
    "constant_observable",
    "horizontal_character",
    "random_cellwise_constant",
    "random_trigonometric",
    "NormReport",
    "l2_norm",
    "sobolev1_proxy",
    "sup_norm_bound",
]
