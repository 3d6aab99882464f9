"""
Pydantic result models for cocycle estimators.
"""
from typing import List, Tuple

from pydantic import BaseModel, Field


class GapEstimate(BaseModel):
    """Growth-rate proxy 1 - log||B_lambda(n)|| / t_n at one frequency."""
    lam: float = Field(description="Frequency")
    alpha_hat: float = Field(description="1 - log||B_lambda(n)|| / t_n")
    n_steps: int = Field(ge=0, description="Zorich steps used")
    t_n: float = Field(ge=0, description="Teichmuller time reached")
    log_norm: float = Field(description="log of the operator 2-norm of the product")
    log_entry_sum: float = Field(description="log of the sum of entry moduli (cheap monitor)")
    band_low: float = Field(description="Smallest alpha_hat over the late checkpoints")
    band_high: float = Field(description="Largest alpha_hat over the late checkpoints")
    checkpoints: List[Tuple[int, float]] = Field(default_factory=list, description="(step, alpha_hat) pairs")

    @property
    def stderr(self) -> float:
        return 0.5 * (self.band_high - self.band_low)


class KZSpectrum(BaseModel):
    """Top Lyapunov exponents of the Zorich cocycle per unit Teichmuller time."""
    exponents: List[float]
    stderr: List[float]
    n_paths: int = Field(ge=1)
    n_zorich: int = Field(ge=1)
    per_path: List[List[float]] = Field(default_factory=list)
