"""
Smoke-sized default configs, one per experiment kind.

They finish in seconds on a laptop and are what the CLI runs when no config
file is given.
"""
from typing import Any, Dict

import numpy as np

from expcli.errors import ConfigInvalid
from expcli.models import ExperimentConfig

SMOKE_SETTINGS: Dict[str, Dict[str, Any]] = {
    "stratum-info": {"stratum": "H(2)"},
    "twisted-sweep": {
        "stratum": "H(2)",
        "lambda_grid": [0.5, 1.0, 2.0],
        "T_grid": np.geomspace(100.0, 1e4, 8).tolist(),
    },
    "product-flow": {
        "stratum": "H(2)",
        "lambda_grid": [0.5, 1.0],
        "T_grid": np.geomspace(100.0, 1e4, 8).tolist(),
        "theta": 0.25,
    },
    "kz-exponents": {"stratum": "H(2)", "n_paths": 4, "n_zorich": 2000, "k_exponents": 2},
    "gap-sweep": {"stratum": "H(2)", "lambda_grid": [0.0, 0.5, 1.0, 2.0], "n_zorich": 2000},
    "spectral": {
        "stratum": "H(2)",
        "lambda_grid": [1.0],
        "r_grid": (0.5 * np.logspace(0.0, -2.0, 6)).tolist(),
        "n_samples": 200,
    },
    "weakmix": {
        "stratum": "H(2)",
        "lambda_grid": [0.5, 1.0, 2.0],
        "T_grid": [10.0, 20.0, 40.0, 80.0, 160.0, 320.0],
        "quadrature": {"panels_per_cell": 8, "nodes_per_panel": 4, "samples_per_interval": 64},
    },
}


def default_config(kind: str, seed: int, **overrides: Any) -> ExperimentConfig:
    """
    Smoke config for ``kind`` with the given seed and overrides.

    Raises:
        ConfigInvalid: If the kind is unknown or an override is invalid
    """
    if kind not in SMOKE_SETTINGS:
        raise ConfigInvalid(f"Unknown experiment kind '{kind}'. Available: {', '.join(SMOKE_SETTINGS)}")
    data: Dict[str, Any] = {"kind": kind, "seed": seed, **SMOKE_SETTINGS[kind]}
    data.update({k: v for k, v in overrides.items() if v is not None})
    return ExperimentConfig.parse(data)
