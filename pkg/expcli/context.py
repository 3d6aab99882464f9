"""
Per-run context handed to every experiment task.

Holds the validated config and derives every surface, observable and start
point from its own random stream, so a task computes the same thing whichever
thread runs it.
"""
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path

import numpy as np

from expcli.models import ExperimentConfig, ObservableSpec
from iet.permutation import Permutation
from observables.cellwise import CellwiseObservable
from observables.library import constant_observable, horizontal_character, random_cellwise_constant, random_trigonometric
from surface.library import resolve_stratum, stratum_surface
from surface.sampling import SeedLike, rng_stream
from surface.zippered import SurfacePoint, ZipperedRectangles

# first component of every stream id
SURFACE_STREAM = 0
OBSERVABLE_STREAM = 1
START_STREAM = 2
PATH_STREAM = 3


def build_observable(spec: ObservableSpec, s: ZipperedRectangles, seed: SeedLike) -> CellwiseObservable:
    if spec.kind == "random_constant":
        return random_cellwise_constant(s, seed, zero_mean=spec.zero_mean)
    if spec.kind == "random_trig":
        return random_trigonometric(s, seed, spec.max_mode, spec.terms_per_cell, zero_mean=spec.zero_mean)
    if spec.kind == "character":
        return horizontal_character(s, spec.k, spec.vertical_frequency)
    return constant_observable(s, spec.value)


@dataclass
class RunContext:
    """
    Everything a task needs besides its own arguments.

    ``output_dir`` is resolved to an absolute path at construction.
    """
    config: ExperimentConfig
    verbose: bool = False

    def __post_init__(self):
        self.output_dir = str(Path(self.config.output_dir).resolve())

    @property
    def output_path(self) -> Path:
        return Path(self.output_dir)

    @cached_property
    def permutation(self) -> Permutation:
        return resolve_stratum(self.config.stratum)

    def stream(self, *task_id: int) -> np.random.Generator:
        return rng_stream(self.config.seed, *task_id)

    def surface(self, index: int) -> ZipperedRectangles:
        return stratum_surface(self.config.stratum, self.stream(SURFACE_STREAM, index))

    def observable(self, s: ZipperedRectangles, index: int) -> CellwiseObservable:
        return build_observable(self.config.observable, s, self.stream(OBSERVABLE_STREAM, index))

    def start_point(self, s: ZipperedRectangles, index: int) -> SurfacePoint:
        """A uniform point on the base interval of surface ``index``."""
        xg = float(self.stream(START_STREAM, index).uniform(0.0, s.total_length))
        return s.base_point(xg)
