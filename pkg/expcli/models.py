"""
Pydantic models for experiment configuration and run manifests.

The config is the single source of every number an experiment uses; its hash
identifies the data a run produces.
"""
import hashlib
import json
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from expcli.errors import ConfigInvalid, IoFailure
from spectral.models import QuadratureSpec
from surface.library import resolve_stratum

SCHEMA_VERSION = 1

ExperimentKind = Literal[
    "stratum-info", "twisted-sweep", "product-flow", "kz-exponents", "gap-sweep", "spectral", "weakmix"
]

# fields that never influence the data files
NON_DATA_FIELDS = {"output_dir", "threads"}


class ObservableSpec(BaseModel):
    """Which observable every surface of the run gets."""
    model_config = ConfigDict(extra="forbid")

    kind: Literal["random_constant", "random_trig", "character", "constant"] = Field(
        default="random_constant", description="Observable family"
    )
    zero_mean: bool = Field(default=True, description="Center random observables")
    max_mode: int = Field(default=2, ge=0, description="Largest |mode| of random_trig terms")
    terms_per_cell: int = Field(default=3, ge=1, description="random_trig terms per rectangle")
    k: float = Field(default=1.0, description="Horizontal frequency of a character")
    vertical_frequency: float = Field(default=0.0, description="Vertical frequency of a character")
    value: float = Field(default=1.0, description="Value of the constant observable")


class ExperimentConfig(BaseModel):
    """
    Versioned experiment configuration.

    Grids are validated here; whether a grid suits a given estimator (geometric,
    enough decades) is checked by the estimator and reported per task.
    """
    model_config = ConfigDict(extra="forbid")

    schema_version: Literal[1] = Field(default=SCHEMA_VERSION, description="Config schema version")
    kind: ExperimentKind = Field(description="Experiment to run")
    stratum: str = Field(default="H(2)", description="Named stratum, 'golden-torus', or permutation text 'A B / B A'")
    seed: int = Field(ge=0, description="Root seed of every random stream")
    surface_count: int = Field(default=1, ge=1, description="Independent surfaces")
    observable: ObservableSpec = Field(default_factory=ObservableSpec)
    lambda_grid: List[float] = Field(default_factory=lambda: [1.0], description="Frequencies")
    T_grid: List[float] = Field(default_factory=lambda: [100.0 * 2 ** i for i in range(8)], description="Flow times")
    r_grid: List[float] = Field(
        default_factory=lambda: [0.5 * 10 ** (-0.4 * i) for i in range(6)], description="Window radii"
    )
    n_samples: int = Field(default=400, ge=100, description="Monte Carlo start points")
    n_zorich: int = Field(default=1000, ge=1, description="Zorich steps per path")
    n_paths: int = Field(default=8, ge=1, description="Monte Carlo paths")
    k_exponents: int = Field(default=2, ge=1, description="Lyapunov exponents to estimate")
    output_dir: str = Field(default="results", description="Where artifacts are written")
    threads: int = Field(default=1, ge=1, le=256, description="Worker threads")
    format: Literal["csv", "json"] = Field(default="csv", description="Table format")
    envelope: bool = Field(default=True, description="Fit running maxima of |I(T)|")
    theta: float = Field(default=0.0, description="Circle coordinate where product-flow orbits start")
    quadrature: QuadratureSpec = Field(default_factory=QuadratureSpec)

    @field_validator("lambda_grid", "T_grid", "r_grid")
    @classmethod
    def _nonempty_finite(cls, v: List[float]) -> List[float]:
        if not v:
            raise ValueError("grid must not be empty")
        if any(x != x or x in (float("inf"), float("-inf")) for x in v):
            raise ValueError(f"grid values must be finite, got {v}")
        return v

    @field_validator("T_grid")
    @classmethod
    def _positive_times(cls, v: List[float]) -> List[float]:
        if any(x <= 0 for x in v):
            raise ValueError("T values must be positive")
        return v

    @field_validator("r_grid")
    @classmethod
    def _radii(cls, v: List[float]) -> List[float]:
        if any(not 0 < x <= 0.5 for x in v):
            raise ValueError("r values must lie in (0, 1/2]")
        return v

    @field_validator("stratum")
    @classmethod
    def _known_stratum(cls, v: str) -> str:
        resolve_stratum(v)
        return v

    @classmethod
    def parse(cls, data: Dict[str, Any]) -> "ExperimentConfig":
        """
        Validate a plain dict.

        Raises:
            ConfigInvalid: On any validation error
        """
        try:
            return cls.model_validate(data)
        except ValidationError as e:
            raise ConfigInvalid(f"Invalid experiment config: {e}") from e

    @classmethod
    def from_json(cls, text: str) -> "ExperimentConfig":
        try:
            return cls.model_validate_json(text)
        except ValidationError as e:
            raise ConfigInvalid(f"Invalid experiment config: {e}") from e

    @classmethod
    def from_file(cls, path: str) -> "ExperimentConfig":
        """
        Raises:
            IoFailure: If the file cannot be read
            ConfigInvalid: If its content is not a valid config
        """
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as e:
            raise IoFailure(f"Cannot read config {path}: {e}") from e
        return cls.from_json(text)

    def to_json(self) -> str:
        return self.model_dump_json(indent=2)

    def with_overrides(self, **overrides: Any) -> "ExperimentConfig":
        """Copy with the non-None overrides applied and re-validated."""
        data = self.model_dump()
        data.update({k: v for k, v in overrides.items() if v is not None})
        return ExperimentConfig.parse(data)

    def config_hash(self) -> str:
        """SHA-256 of the canonical JSON of every data-relevant field."""
        data = self.model_dump(exclude=NON_DATA_FIELDS)
        canonical = json.dumps(data, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


class TaskStatus(BaseModel):
    task_id: List[int]
    name: str
    status: Literal["ok", "failed"]
    message: Optional[str] = None
    wall_time: float = Field(ge=0)


class FileEntry(BaseModel):
    path: str = Field(description="Path relative to the output directory")
    sha256: str
    size: int = Field(ge=0)


class RunManifest(BaseModel):
    """What a run did and what it wrote."""
    config_hash: str
    artifact_version: str
    kind: ExperimentKind
    started_at: str = Field(description="UTC timestamp, ISO 8601")
    wall_time: float = Field(ge=0)
    tasks: List[TaskStatus] = Field(default_factory=list)
    files: List[FileEntry] = Field(default_factory=list)

    @property
    def failed(self) -> List[TaskStatus]:
        return [t for t in self.tasks if t.status == "failed"]

    @property
    def exit_code(self) -> int:
        return 3 if self.failed else 0
