"""
Exceptions raised by the interval exchange engine.
"""


class DiscontinuityHit(ValueError):
    """A point sits on (or within tie tolerance of) an interior discontinuity."""

    def __init__(self, x: float, breakpoint: float):
        self.x = x
        self.breakpoint = breakpoint
        super().__init__(f"Point {x!r} is within tie tolerance of discontinuity {breakpoint!r}")


class ConnectionDetected(ValueError):
    """Last-letter lengths tie during induction (Keane condition failure)."""

    def __init__(self, top_length: float, bottom_length: float):
        self.top_length = top_length
        self.bottom_length = bottom_length
        super().__init__(
            f"Saddle connection found: last top length {top_length!r} "
            f"ties with last bottom length {bottom_length!r}"
        )


class ReduciblePermutation(ValueError):
    """The permutation splits into two independent blocks."""
