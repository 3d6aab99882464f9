"""
Exceptions raised by surface construction and flow.
"""
from typing import Optional


class InvalidSuspension(ValueError):
    """Suspension datum outside the cone, or a non-positive height."""


class SingularityHit(ValueError):
    """An orbit runs into (or within clearance of) a cone point."""

    def __init__(self, time: float, position: Optional[float] = None):
        self.time = time
        self.position = position
        where = f" at base position {position!r}" if position is not None else ""
        super().__init__(f"Orbit hits a singularity at time {time!r}{where}")
