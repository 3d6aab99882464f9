"""
Reproducible experiment runner: configs, seeded tasks, parallel dispatch,
artifacts and manifests.
"""
__version__ = "0.1.0"

from expcli.errors import ConfigInvalid, IoFailure  # noqa: E402
from expcli.models import ExperimentConfig, FileEntry, ObservableSpec, RunManifest, TaskStatus  # noqa: E402

__all__ = [
    "__version__",
    "ConfigInvalid",
    "ExperimentConfig",
    "FileEntry",
    "IoFailure",
    "ObservableSpec",
    "RunManifest",
    "TaskStatus",
]
