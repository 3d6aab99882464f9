"""
Result types of twisted integrals, orbit decompositions and exponent fits.
"""
from dataclasses import dataclass
from typing import List

from pydantic import BaseModel, Field, field_validator

from surface.zippered import SurfacePoint


@dataclass(frozen=True)
class TwistedTrace:
    """
    Value of int_0^T exp(2 pi i lam (t0 + t)) f(phi_t(start)) dt.

    With absolute_phase the phase runs on the global orbit clock t0 + t, so
    traces of consecutive pieces of one orbit add up to the whole.
    """
    value: complex
    T: float
    lam: float
    start: SurfacePoint
    absolute_phase: bool = True
    t0: float = 0.0
    n_blocks: int = 0

    def __add__(self, other: "TwistedTrace") -> "TwistedTrace":
        if other.lam != self.lam:
            raise ValueError(f"Cannot add traces at frequencies {self.lam} and {other.lam}")
        return TwistedTrace(self.value + other.value, self.T + other.T, self.lam, self.start,
                            self.absolute_phase and other.absolute_phase, self.t0,
                            self.n_blocks + other.n_blocks)


class ChopSegment(BaseModel):
    start: float = Field(description="Orbit time where the segment starts")
    length: float = Field(ge=0, description="Segment duration")
    level: int = Field(ge=0, description="Scale index l (0 for the remainder)")


class ChopDecomposition(BaseModel):
    """Greedy splitting of [0, T] into segments of length exp(t_l)."""
    T: float
    scales: List[float] = Field(description="T_l = exp(t_l), l = 1..n")
    counts: List[int] = Field(description="m_l, number of segments at scale l")
    remainder: float = Field(ge=0, description="tau, the leftover piece")
    segments: List[ChopSegment] = Field(description="Segments in orbit order")


class ExponentFit(BaseModel):
    """Least-squares power law |I(T)| ~ C T^exponent on a geometric grid."""
    exponent: float
    intercept: float
    r_squared: float = Field(ge=0.0, le=1.0)
    stderr: float = Field(default=0.0, ge=0.0)
    T_grid: List[float]
    values: List[float] = Field(default_factory=list, description="Fitted magnitudes, one per grid point")
    re: List[float] = Field(default_factory=list, description="Real part of I(T) at each grid point")
    im: List[float] = Field(default_factory=list, description="Imaginary part of I(T) at each grid point")
    envelope: bool = True

    @field_validator("exponent")
    @classmethod
    def _finite(cls, v: float) -> float:
        if v != v or v in (float("inf"), float("-inf")):
            raise ValueError(f"Exponent must be finite, got {v}")
        return v

    @property
    def saving(self) -> float:
        """1 - exponent, the power saving over the trivial bound."""
        return 1.0 - self.exponent
