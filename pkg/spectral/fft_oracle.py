"""
Independent spectral estimates from the autocorrelation t -> <f o phi_t, f>.

The autocorrelation is windowed by w(t) = cos^2(pi t / (2 T_w)) on [-T_w, T_w]
and Fourier transformed, giving the spectral measure smoothed at scale 1/T_w.
Only used to cross-check the mass bounds.
"""
import logging
from typing import Optional, Tuple

import numpy as np
from scipy import integrate

from observables.cellwise import CellwiseObservable
from spectral.decay import correlation_series
from spectral.models import QuadratureSpec
from surface.zippered import ZipperedRectangles

logger = logging.getLogger(__name__)


def hann_window(times: np.ndarray, T_window: float) -> np.ndarray:
    return np.cos(np.pi * times / (2.0 * T_window)) ** 2


def autocorrelation(s: ZipperedRectangles, f: CellwiseObservable, T_window: float, n_times: int,
                    quadrature: Optional[QuadratureSpec] = None) -> Tuple[np.ndarray, np.ndarray]:
    """C(t) = <f o phi_t, f> on n_times uniform samples of [0, T_window]."""
    if T_window <= 0 or n_times < 2:
        raise ValueError("Need T_window > 0 and at least 2 samples")
    times = np.linspace(0.0, T_window, n_times)
    return times, correlation_series(s, f, f, times, quadrature)


def spectral_density(s: ZipperedRectangles, f: CellwiseObservable, T_window: float, n_times: int = 1024,
                     quadrature: Optional[QuadratureSpec] = None) -> Tuple[np.ndarray, np.ndarray]:
    """
    Smoothed spectral density on the FFT frequency grid.

    C(-t) = conj(C(t)) extends the samples to [-T_w, T_w); the density is
    dt * FFT of the windowed sequence, real up to rounding.

    Returns:
        (frequencies ascending, density)
    """
    times, corr = autocorrelation(s, f, T_window, n_times, quadrature)
    dt = times[1] - times[0]
    # samples at t = -(n-1)dt .. (n-2)dt, zero lag at index n-1
    symmetric = np.concatenate([np.conj(corr[:0:-1]), corr[:-1]])
    lags = np.concatenate([-times[:0:-1], times[:-1]])
    sequence = symmetric * hann_window(lags, T_window)
    shifted = np.roll(sequence, -(len(times) - 1))
    density = dt * np.fft.fft(shifted)
    freqs = np.fft.fftfreq(len(shifted), dt)
    order = np.argsort(freqs)
    return freqs[order], density[order].real


def window_mass(s: ZipperedRectangles, f: CellwiseObservable, low: float, high: float, T_window: float,
                n_times: int = 2048, quadrature: Optional[QuadratureSpec] = None) -> float:
    """
    Smoothed spectral mass of [low, high].

    Integrates the smoothed density over the window in closed form:
    2 Re int_0^T_w C(t) w(t) K(t) dt with K(t) = int_low^high exp(-2 pi i xi t) d xi.
    """
    if high <= low:
        raise ValueError(f"Empty window [{low}, {high}]")
    times, corr = autocorrelation(s, f, T_window, n_times, quadrature)
    kernel = np.empty(len(times), dtype=complex)
    kernel[0] = high - low
    t = times[1:]
    kernel[1:] = (np.exp(-2j * np.pi * high * t) - np.exp(-2j * np.pi * low * t)) / (-2j * np.pi * t)
    integrand = corr * hann_window(times, T_window) * kernel
    mass = 2.0 * float(np.real(integrate.trapezoid(integrand, times)))
    logger.debug(f"FFT-side mass of [{low}, {high}] at T_w={T_window}: {mass:.4g}")
    return mass
