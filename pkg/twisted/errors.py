"""
Exceptions raised by the twisted integrators and fits.
"""


class NonFiniteInput(ValueError):
    """Frequency, time or start offset is NaN or infinite, or time is negative."""


class UnsupportedObservable(ValueError):
    """The fast integrator only handles cellwise-constant observables."""


class EmptyTimes(ValueError):
    """No Teichmuller times were given to the decomposition."""


class DegenerateData(ValueError):
    """Every value is below the fitting floor, or the grid is too short."""
