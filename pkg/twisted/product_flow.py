"""
Ergodic integrals of the product flow Phi_t(p, theta) = (phi_t(p), theta + lam t) on M x T.

A function with Fourier modes F(p, theta) = sum_n f_n(p) exp(2 pi i n theta)
integrates mode by mode into twisted integrals at frequencies n * lam.
"""
import logging
from typing import Sequence, Tuple

import numpy as np

from observables.cellwise import CellwiseObservable, mean
from surface.flow import record_orbit
from surface.zippered import SurfacePoint, ZipperedRectangles
from twisted.direct import check_finite, twisted_integral_direct

logger = logging.getLogger(__name__)

FourierModes = Sequence[Tuple[int, CellwiseObservable]]


def product_flow_integral(s: ZipperedRectangles, F_modes: FourierModes, lam: float, x0: SurfacePoint,
                          theta: float, T: float) -> complex:
    """
    int_0^T F(Phi_t(x0, theta)) dt = sum_n exp(2 pi i n theta) int_0^T exp(2 pi i n lam t) f_n(phi_t x0) dt.

    Raises:
        SingularityHit: If the orbit of x0 meets a cone point
        NonFiniteInput: On non-finite lam or T
    """
    check_finite(lam, T)
    total = 0j
    for n, f_n in F_modes:
        trace = twisted_integral_direct(s, f_n, n * lam, x0, T)
        total += np.exp(2j * np.pi * n * theta) * trace.value
    return complex(total)


def product_flow_quadrature(s: ZipperedRectangles, F_modes: FourierModes, lam: float, x0: SurfacePoint,
                            theta: float, T: float, step: float = 1e-4) -> complex:
    """
    Brute-force time-stepped integral of F along the product flow.

    Every rectangle crossing is cut into pieces of length <= step and F is
    evaluated at their midpoints, so discontinuities across rectangle edges
    never fall inside a quadrature piece.
    """
    check_finite(lam, T)
    record = record_orbit(s, x0, T)
    total = 0j
    for i in range(len(record)):
        duration = record.y1[i] - record.y0[i]
        if duration <= 0:
            continue
        pieces = max(int(np.ceil(duration / step)), 1)
        h = duration / pieces
        local = (np.arange(pieces) + 0.5) * h
        cells = np.full(pieces, record.cells[i])
        xs = np.full(pieces, record.xs[i])
        ys = record.y0[i] + local
        clock = record.t0[i] + local
        for n, f_n in F_modes:
            values = f_n.evaluate(s, cells, xs, ys)
            total += np.sum(values * np.exp(2j * np.pi * n * (theta + lam * clock))) * h
    return complex(total)


def product_flow_mean(s: ZipperedRectangles, F_modes: FourierModes) -> complex:
    """Integral of F over M x T: only the n = 0 mode survives."""
    return sum((mean(f_n, s) for n, f_n in F_modes if n == 0), 0j)


def product_flow_deviation(s: ZipperedRectangles, F_modes: FourierModes, lam: float, x0: SurfacePoint,
                           theta: float, T: float) -> complex:
    """Ergodic integral minus T times the space average."""
    return product_flow_integral(s, F_modes, lam, x0, theta, T) - T * product_flow_mean(s, F_modes)