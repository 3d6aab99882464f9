"""
Registry of experiment kinds.

Each kind has a planner, which splits the run into independent tasks with
stable ids, and a reporter, which turns the task results (in task-id order)
into tables and a summary.
"""
import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Tuple

import numpy as np

from cocycles.gap import gap_sweep
from cocycles.lyapunov import path_exponents, summarize_exponents
from expcli.context import PATH_STREAM, START_STREAM, RunContext
from expcli.errors import ConfigInvalid
from iet.stratum import genus_and_stratum, singularity_profile, stratum_name, twisted_cohomology_dimension
from spectral.decay import correlation_decay
from spectral.local_dim import fit_local_dimension
from spectral.mass import spectral_mass_upper
from spectral.sandwich import weak_mixing_bound
from twisted.errors import DegenerateData
from twisted.fitting import fit_product_deviation, geometric_grid, sweep_and_fit

logger = logging.getLogger(__name__)

Table = List[Dict[str, Any]]


@dataclass(frozen=True)
class Task:
    task_id: Tuple[int, ...]
    name: str
    fn: Callable[[], Any]


@dataclass
class TaskResult:
    task: Task
    value: Any = None
    error: Optional[str] = None
    wall_time: float = 0.0

    @property
    def ok(self) -> bool:
        return self.error is None


@dataclass
class ExperimentOutput:
    tables: Dict[str, Table] = field(default_factory=dict)
    summary: Dict[str, Any] = field(default_factory=dict)


class ExperimentRegistry:
    """
    Central registry of experiment kinds.

    Planners validate what the config alone cannot (for example k against the
    genus) and raise ConfigInvalid before any task runs.
    """

    def __init__(self, context: RunContext):
        self.context = context
        self.config = context.config
        self._planners: Dict[str, Callable[[], List[Task]]] = {
            "stratum-info": self._plan_stratum_info,
            "twisted-sweep": self._plan_twisted_sweep,
            "product-flow": self._plan_product_flow,
            "kz-exponents": self._plan_kz_exponents,
            "gap-sweep": self._plan_gap_sweep,
            "spectral": self._plan_spectral,
            "weakmix": self._plan_weakmix,
        }
        self._reporters: Dict[str, Callable[[List[TaskResult]], ExperimentOutput]] = {
            "stratum-info": self._report_stratum_info,
            "twisted-sweep": self._report_twisted_sweep,
            "product-flow": self._report_product_flow,
            "kz-exponents": self._report_kz_exponents,
            "gap-sweep": self._report_gap_sweep,
            "spectral": self._report_spectral,
            "weakmix": self._report_weakmix,
        }
        logger.info(f"ExperimentRegistry initialized with {len(self._planners)} experiment kinds")

    def plan(self, kind: str) -> List[Task]:
        """
        Tasks of an experiment, sorted by task id.

        Raises:
            ConfigInvalid: If the kind does not exist or the config does not suit it
        """
        if kind not in self._planners:
            available = ", ".join(self._planners.keys())
            raise ConfigInvalid(f"Experiment '{kind}' not found. Available experiments: {available}")
        try:
            tasks = self._planners[kind]()
        except ValueError as e:
            raise ConfigInvalid(f"Config does not suit {kind}: {e}") from e
        logger.debug(f"Planned {len(tasks)} tasks for {kind}")
        return sorted(tasks, key=lambda t: t.task_id)

    def report(self, kind: str, results: List[TaskResult]) -> ExperimentOutput:
        ok = [r for r in sorted(results, key=lambda r: r.task.task_id) if r.ok]
        return self._reporters[kind](ok)

    def list_experiments(self) -> Dict[str, str]:
        return {
            "stratum-info": "Genus, stratum, intersection rank and twisted cohomology dimensions of a permutation",
            "twisted-sweep": "Power-law fits of twisted ergodic integrals over a geometric T grid",
            "product-flow": "Power-law fits of ergodic-integral deviations of the product flow on M x T",
            "kz-exponents": "Top Kontsevich-Zorich exponents by Monte Carlo QR accumulation",
            "gap-sweep": "Growth-rate proxy of the twisted cocycle across frequencies",
            "spectral": "Spectral-mass upper bounds and local dimensions",
            "weakmix": "Cesaro decay of squared correlations and the implied weak-mixing exponent",
        }

    def get_experiments_description(self) -> str:
        return "\n".join(f"• {name}: {description}" for name, description in self.list_experiments().items())

    def experiment_exists(self, kind: str) -> bool:
        return kind in self._planners

    # stratum-info

    def _plan_stratum_info(self) -> List[Task]:
        p = self.context.permutation
        return [Task((0,), "stratum-info", lambda: self._stratum_info_row(p))]

    @staticmethod
    def _stratum_info_row(p) -> Dict[str, Any]:
        genus, kappa = genus_and_stratum(p)
        return {
            "permutation": str(p),
            "d": p.d,
            "genus": genus,
            "stratum": stratum_name(kappa),
            "singularities": " ".join(str(m) for m in singularity_profile(p)),
            "rank_omega": int(np.linalg.matrix_rank(p.intersection_matrix())),
            "twisted_dim_integral": twisted_cohomology_dimension(genus, True),
            "twisted_dim_generic": twisted_cohomology_dimension(genus, False),
        }

    def _report_stratum_info(self, results: List[TaskResult]) -> ExperimentOutput:
        rows = [r.value for r in results]
        return ExperimentOutput(tables={"stratum": rows}, summary=rows[0] if rows else {})

    # twisted-sweep

    def _plan_twisted_sweep(self) -> List[Task]:
        tasks = []
        for i in range(self.config.surface_count):
            for j, lam in enumerate(self.config.lambda_grid):
                tasks.append(Task((i, j), f"twisted-sweep[{i},{j}]",
                                  lambda i=i, lam=lam: self._twisted_fit(i, lam, self.config.T_grid)))
        return tasks

    def _twisted_fit(self, i: int, lam: float, T_grid: List[float]):
        ctx = self.context
        s = ctx.surface(i)
        f = ctx.observable(s, i)
        return sweep_and_fit(s, f, lam, ctx.start_point(s, i), T_grid, envelope=self.config.envelope)

    def _report_twisted_sweep(self, results: List[TaskResult]) -> ExperimentOutput:
        return self._fit_output(results)

    def _fit_output(self, results: List[TaskResult]) -> ExperimentOutput:
        """Fits, complex I(T) curves and the input hashes of every surface that produced a fit."""
        fits, curves = [], []
        for r in results:
            i, j = r.task.task_id
            lam = self.config.lambda_grid[j]
            fit = r.value
            fits.append({"surface": i, "lambda": lam, "exponent": fit.exponent, "saving": fit.saving,
                         "r_squared": fit.r_squared, "stderr": fit.stderr})
            curves.extend({"surface": i, "T": T, "lambda": lam, "re": re, "im": im, "abs": abs(complex(re, im)),
                           "envelope": v}
                          for T, re, im, v in zip(fit.T_grid, fit.re, fit.im, fit.values))
        savings = [row["saving"] for row in fits]
        summary = {
            "inputs": [self._input_hashes(i) for i in sorted({row["surface"] for row in fits})],
            "fits": len(fits),
            "saving_at_least_0.05": sum(1 for v in savings if v >= 0.05),
            "median_exponent": float(np.median([row["exponent"] for row in fits])) if fits else None,
        }
        return ExperimentOutput(tables={"fits": fits, "curves": curves}, summary=summary)

    def _input_hashes(self, i: int) -> Dict[str, Any]:
        s = self.context.surface(i)
        return {"surface": i, "surface_hash": s.digest(), "observable_hash": self.context.observable(s, i).digest()}

    # product-flow

    def _plan_product_flow(self) -> List[Task]:
        tasks = []
        for i in range(self.config.surface_count):
            for j, lam in enumerate(self.config.lambda_grid):
                tasks.append(Task((i, j), f"product-flow[{i},{j}]",
                                  lambda i=i, lam=lam: self._product_fit(i, lam)))
        return tasks

    def _product_fit(self, i: int, lam: float):
        ctx = self.context
        s = ctx.surface(i)
        f = ctx.observable(s, i)
        # F(p, theta) = f(p) + f(p) exp(2 pi i theta)
        return fit_product_deviation(s, [(0, f), (1, f)], lam, ctx.start_point(s, i), self.config.theta,
                                     self.config.T_grid)

    def _report_product_flow(self, results: List[TaskResult]) -> ExperimentOutput:
        return self._fit_output(results)

    # kz-exponents

    def _plan_kz_exponents(self) -> List[Task]:
        p = self.context.permutation
        genus, _ = genus_and_stratum(p)
        k = self.config.k_exponents
        if k > 2 * genus:
            raise ValueError(f"k_exponents={k} exceeds 2g={2 * genus}")
        n = self.config.n_zorich
        return [
            Task((i,), f"kz-path[{i}]",
                 lambda i=i: path_exponents(p, n, k, self.context.stream(PATH_STREAM, i)))
            for i in range(self.config.n_paths)
        ]

    def _report_kz_exponents(self, results: List[TaskResult]) -> ExperimentOutput:
        if not results:
            return ExperimentOutput(tables={"exponents": [], "paths": []}, summary={"n_paths": 0})
        spectrum = summarize_exponents([r.value for r in results], self.config.n_zorich)
        exponents = [{"index": k + 1, "exponent": e, "stderr": se}
                     for k, (e, se) in enumerate(zip(spectrum.exponents, spectrum.stderr))]
        paths = [{"path": r.task.task_id[0], "index": k + 1, "exponent": float(v)}
                 for r in results for k, v in enumerate(r.value)]
        summary = spectrum.model_dump(exclude={"per_path"})
        return ExperimentOutput(tables={"exponents": exponents, "paths": paths}, summary=summary)

    # gap-sweep

    def _plan_gap_sweep(self) -> List[Task]:
        return [Task((i,), f"gap-sweep[{i}]", lambda i=i: self._gap(i)) for i in range(self.config.surface_count)]

    def _gap(self, i: int):
        s = self.context.surface(i)
        return gap_sweep(s.permutation, s.iet.lengths, self.config.lambda_grid, self.config.n_zorich,
                         heights=s.heights)

    def _report_gap_sweep(self, results: List[TaskResult]) -> ExperimentOutput:
        gaps, checkpoints = [], []
        for r in results:
            i = r.task.task_id[0]
            for est in r.value:
                gaps.append({"surface": i, "lambda": est.lam, "alpha_hat": est.alpha_hat, "stderr": est.stderr,
                             "n_steps": est.n_steps, "t_n": est.t_n, "band_low": est.band_low,
                             "band_high": est.band_high})
                checkpoints.extend({"surface": i, "lambda": est.lam, "step": step, "alpha_hat": a}
                                   for step, a in est.checkpoints)
        nonzero = [row["alpha_hat"] for row in gaps if row["lambda"] != 0]
        summary = {"estimates": len(gaps), "min_alpha_hat_nonzero_lambda": min(nonzero) if nonzero else None}
        return ExperimentOutput(tables={"gap": gaps, "checkpoints": checkpoints}, summary=summary)

    # spectral

    def _plan_spectral(self) -> List[Task]:
        tasks = []
        for i in range(self.config.surface_count):
            for j, lam in enumerate(self.config.lambda_grid):
                tasks.append(Task((i, j), f"spectral[{i},{j}]", lambda i=i, j=j, lam=lam: self._spectral(i, j, lam)))
        return tasks

    def _spectral(self, i: int, j: int, lam: float):
        ctx = self.context
        s = ctx.surface(i)
        f = ctx.observable(s, i)
        estimates = [
            spectral_mass_upper(s, f, lam, r, self.config.n_samples, ctx.stream(START_STREAM, i, j))
            for r in self.config.r_grid
        ]
        try:
            fit = fit_local_dimension([e.r for e in estimates], [e.mass_upper for e in estimates], lam)
        except DegenerateData as e:
            logger.warning(f"No local dimension for surface {i}, lambda={lam}: {e}")
            fit = None
        return estimates, fit

    def _report_spectral(self, results: List[TaskResult]) -> ExperimentOutput:
        masses, dims = [], []
        for r in results:
            i = r.task.task_id[0]
            estimates, fit = r.value
            masses.extend({"surface": i, "lambda": e.lam, "r": e.r, "mass_upper": e.mass_upper,
                           "stderr": e.stderr, "l2_twisted": e.l2_twisted, "T_used": e.T_used}
                          for e in estimates)
            if fit is not None:
                dims.append({"surface": i, "lambda": fit.lam, "slope": fit.slope, "stderr": fit.stderr,
                             "ci_low": fit.ci_low, "ci_high": fit.ci_high})
        summary = {"windows": len(masses), "local_dimension_fits": len(dims)}
        return ExperimentOutput(tables={"mass": masses, "local_dimension": dims}, summary=summary)

    # weakmix

    def _plan_weakmix(self) -> List[Task]:
        return [Task((i,), f"weakmix[{i}]", lambda i=i: self._weakmix(i)) for i in range(self.config.surface_count)]

    def _weakmix(self, i: int):
        ctx = self.context
        s = ctx.surface(i)
        f = ctx.observable(s, i)
        curve = correlation_decay(s, f, f, self.config.T_grid, self.config.quadrature)
        sweep_grid = geometric_grid(self.config.T_grid[0], self.config.T_grid[-1], max(8, len(self.config.T_grid)))
        fits = [(lam, sweep_and_fit(s, f, lam, ctx.start_point(s, i), sweep_grid))
                for lam in self.config.lambda_grid if lam != 0]
        return curve, fits

    @staticmethod
    def _constant_growth(fits) -> float:
        """Slope of the fitted log-constants against log(1 + |lambda|), floored at 0."""
        if len({abs(lam) for lam, _ in fits}) < 2:
            return 0.0
        x = np.log1p([abs(lam) for lam, _ in fits])
        y = np.array([fit.intercept for _, fit in fits])
        return max(float(np.polyfit(x, y, 1)[0]), 0.0)

    def _report_weakmix(self, results: List[TaskResult]) -> ExperimentOutput:
        decay, bounds = [], []
        for r in results:
            i = r.task.task_id[0]
            curve, fits = r.value
            decay.extend({"surface": i, "T": T, "decay_value": v} for T, v in zip(curve.T_grid, curve.values))
            alpha = min((fit.saving for _, fit in fits), default=0.0)
            beta = self._constant_growth(fits)
            admissible = weak_mixing_bound(alpha, beta) if alpha > 0 else None
            bounds.append({"surface": i, "fitted_decay": curve.exponent, "ci_low": curve.ci_low,
                           "ci_high": curve.ci_high, "alpha": alpha, "beta": beta,
                           "admissible_exponent": admissible})
        decaying = sum(1 for row in bounds if row["ci_high"] is not None and row["ci_high"] < 0)
        summary = {"surfaces": len(bounds), "decaying_with_95pct_confidence": decaying}
        if bounds and all(row["admissible_exponent"] is not None for row in bounds):
            summary["min_admissible_exponent"] = min(row["admissible_exponent"] for row in bounds)
        return ExperimentOutput(tables={"decay": decay, "weakmix_bound": bounds}, summary=summary)
