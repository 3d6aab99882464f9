"""
Experiment configs, the registry, the async dispatcher, artifact persistence
and the command-line interface.
"""
import csv
import hashlib
import json
import os
import time

import numpy as np
import pytest

from expcli.cli import EXIT_CONFIG, EXIT_OK, EXIT_PARTIAL, build_parser, main
from expcli.context import RunContext
from expcli.defaults import SMOKE_SETTINGS, default_config
from expcli.dispatcher import dispatch, run_task
from expcli.errors import ConfigInvalid, IoFailure
from expcli.experiment_registry import ExperimentRegistry, Task
from expcli.models import ExperimentConfig, RunManifest
from expcli.persistence import ArtifactWriter, read_manifest, table_to_csv, verify_manifest
from expcli.plots import plot_script
from expcli.runner import run_async


def _sweep_config(output_dir, threads=1, **overrides):
    data = {
        "kind": "twisted-sweep",
        "stratum": "H(2)",
        "seed": 3,
        "surface_count": 2,
        "lambda_grid": [0.5, 1.0],
        "T_grid": np.geomspace(10.0, 1000.0, 8).tolist(),
        "output_dir": output_dir,
        "threads": threads,
    }
    data.update(overrides)
    return ExperimentConfig.parse(data)


class TestExperimentConfig:
    """Test config validation, serialization and hashing."""

    def test_seed_is_required(self):
        """A config without a seed is invalid."""
        with pytest.raises(ConfigInvalid):
            ExperimentConfig.parse({"kind": "stratum-info"})

    @pytest.mark.parametrize("field, value", [
        ("lambda_grid", []),
        ("T_grid", [0.0, 1.0]),
        ("r_grid", [0.6]),
        ("stratum", "H(7)"),
        ("kind", "unknown"),
        ("threads", 0),
        ("n_samples", 10),
    ])
    def test_invalid_fields(self, field, value):
        """Bad grids, strata, kinds and counts are rejected."""
        data = {"kind": "spectral", "seed": 1, field: value}
        with pytest.raises(ConfigInvalid):
            ExperimentConfig.parse(data)

    def test_unknown_keys_are_rejected(self):
        """Typos in config keys do not pass silently."""
        with pytest.raises(ConfigInvalid):
            ExperimentConfig.parse({"kind": "spectral", "seed": 1, "lamda_grid": [1.0]})

    def test_json_round_trip(self):
        """to_json / from_json is lossless."""
        config = default_config("spectral", 9)
        restored = ExperimentConfig.from_json(config.to_json())
        assert restored == config
        assert restored.to_json() == config.to_json()

    def test_hash_ignores_run_metadata(self):
        """output_dir and threads do not change the hash; the seed does."""
        config = default_config("twisted-sweep", 1)
        assert config.with_overrides(output_dir="elsewhere", threads=8).config_hash() == config.config_hash()
        assert config.with_overrides(seed=2).config_hash() != config.config_hash()

    def test_with_overrides_skips_none(self):
        """None overrides leave fields untouched."""
        config = default_config("spectral", 1)
        assert config.with_overrides(seed=None, threads=None) == config

    def test_from_missing_file(self, temp_output_dir):
        """A missing file is an I/O failure."""
        with pytest.raises(IoFailure):
            ExperimentConfig.from_file(os.path.join(temp_output_dir, "missing.json"))

    def test_from_file(self, temp_output_dir):
        """Configs load from JSON files."""
        path = os.path.join(temp_output_dir, "config.json")
        with open(path, "w", encoding="utf-8") as f:
            f.write(default_config("gap-sweep", 4).to_json())
        assert ExperimentConfig.from_file(path).kind == "gap-sweep"

    def test_default_config_unknown_kind(self):
        """Smoke defaults exist only for known kinds."""
        with pytest.raises(ConfigInvalid):
            default_config("nope", 1)

    def test_smoke_defaults_validate(self):
        """Every smoke default is a valid config."""
        for kind in SMOKE_SETTINGS:
            assert default_config(kind, 0).kind == kind


class TestRegistry:
    """Test planning and reporting."""

    def test_plan_ids_are_sorted(self, temp_output_dir):
        """Tasks come back in task-id order."""
        config = _sweep_config(temp_output_dir)
        registry = ExperimentRegistry(RunContext(config=config))
        tasks = registry.plan("twisted-sweep")
        assert [t.task_id for t in tasks] == [(0, 0), (0, 1), (1, 0), (1, 1)]

    def test_unknown_kind(self, temp_output_dir):
        """Unknown kinds are a config error."""
        registry = ExperimentRegistry(RunContext(config=_sweep_config(temp_output_dir)))
        with pytest.raises(ConfigInvalid):
            registry.plan("nope")
        assert not registry.experiment_exists("nope")
        assert "twisted-sweep" in registry.get_experiments_description()

    def test_k_beyond_genus(self, temp_output_dir):
        """More exponents than 2g is a config error raised before any task runs."""
        config = default_config("kz-exponents", 1, k_exponents=5, output_dir=temp_output_dir)
        registry = ExperimentRegistry(RunContext(config=config))
        with pytest.raises(ConfigInvalid):
            registry.plan("kz-exponents")

    def test_context_streams_are_stable(self, temp_output_dir):
        """Surfaces depend on the seed and index only."""
        config = _sweep_config(temp_output_dir)
        a, b = RunContext(config=config), RunContext(config=config.with_overrides(threads=4))
        assert a.surface(1).to_json() == b.surface(1).to_json()
        assert a.surface(0).to_json() != a.surface(1).to_json()


class TestDispatcher:
    """Test bounded-parallel task execution."""

    def test_run_task_captures_errors(self):
        """Exceptions become error strings."""
        def boom():
            raise ValueError("bad input")
        result = run_task(Task((0,), "boom", boom))
        assert not result.ok
        assert result.error == "ValueError: bad input"

    async def test_results_in_task_order(self):
        """Results are sorted by task id whatever the completion order."""
        def sleeper(delay, value):
            def fn():
                time.sleep(delay)
                return value
            return fn
        tasks = [Task((2,), "c", sleeper(0.0, "c")), Task((0,), "a", sleeper(0.05, "a")),
                 Task((1,), "b", sleeper(0.02, "b"))]
        results = await dispatch(tasks, threads=3)
        assert [r.value for r in results] == ["a", "b", "c"]

    async def test_invalid_thread_count(self):
        """At least one worker is needed."""
        with pytest.raises(ValueError):
            await dispatch([], threads=0)


class TestPersistence:
    """Test artifact writing and manifests."""

    def test_csv_cells(self):
        """Floats keep their repr, booleans are lowercase, None is empty."""
        text = table_to_csv([{"a": 0.1, "b": True, "c": None, "d": 3}])
        assert text == "a,b,c,d\n0.1,true,,3\n"
        assert table_to_csv([]) == ""

    def test_refuses_escaping_paths(self, temp_output_dir):
        """Files must stay inside the output directory."""
        writer = ArtifactWriter(temp_output_dir)
        with pytest.raises(IoFailure):
            writer.write_text("../outside.txt", "x")

    def test_entries_record_digests(self, temp_output_dir):
        """Every written file is indexed with its size."""
        writer = ArtifactWriter(temp_output_dir)
        writer.write_json("b.json", {"x": 1})
        writer.write_text("a.txt", "hello\n")
        assert [e.path for e in writer.entries] == ["a.txt", "b.json"]
        assert writer.entries[0].size == 6

    def test_plot_scripts(self):
        """Plot scripts exist for every kind with a curve to draw."""
        script = plot_script("twisted-sweep", "csv")
        assert "matplotlib" in script and "curves.csv" in script
        assert 'X, Y = "T", "abs"' in script
        assert "curves.json" in plot_script("product-flow", "json")
        assert plot_script("stratum-info", "csv") is None


class TestRunner:
    """Test end-to-end runs."""

    async def test_stratum_info(self, temp_output_dir):
        """H(2) reports genus 2, one zero of order 2 and 4 letters."""
        config = default_config("stratum-info", 1, output_dir=temp_output_dir)
        manifest = await run_async(config)
        assert manifest.exit_code == 0
        with open(os.path.join(temp_output_dir, "summary.json"), encoding="utf-8") as f:
            summary = json.load(f)
        assert summary["genus"] == 2
        assert summary["stratum"] == "H(2)"
        assert summary["d"] == 4
        assert summary["rank_omega"] == 4
        assert summary["twisted_dim_generic"] == 2

    async def test_manifest_verifies(self, temp_output_dir):
        """The manifest on disk indexes every artifact with a matching digest."""
        config = default_config("stratum-info", 1, output_dir=temp_output_dir)
        await run_async(config)
        manifest = read_manifest(temp_output_dir)
        assert {e.path for e in manifest.files} >= {"stratum.csv", "summary.json", "config.json"}
        assert verify_manifest(temp_output_dir, manifest) == []
        with open(os.path.join(temp_output_dir, "stratum.csv"), "a", encoding="utf-8") as f:
            f.write("tampered\n")
        assert verify_manifest(temp_output_dir, manifest) == ["stratum.csv"]

    async def test_deterministic_across_threads(self, temp_output_dir):
        """Data files are byte-identical for one and three worker threads."""
        one = os.path.join(temp_output_dir, "one")
        three = os.path.join(temp_output_dir, "three")
        first = await run_async(_sweep_config(one, threads=1))
        second = await run_async(_sweep_config(three, threads=3))
        assert first.config_hash == second.config_hash
        for name in ("fits.csv", "curves.csv", "summary.json", "plot.py"):
            with open(os.path.join(one, name), "rb") as a, open(os.path.join(three, name), "rb") as b:
                assert a.read() == b.read()

    async def test_sweep_artifacts(self, temp_output_dir):
        """Curves hold complex I(T) per grid point; the summary names the inputs by hash."""
        config = _sweep_config(temp_output_dir)
        manifest = await run_async(config)
        assert manifest.exit_code == 0
        with open(os.path.join(temp_output_dir, "curves.csv"), newline="", encoding="utf-8") as f:
            rows = list(csv.DictReader(f))
        assert {"T", "lambda", "re", "im", "abs"} <= set(rows[0])
        assert len(rows) == 2 * 2 * len(config.T_grid)
        for row in rows:
            assert float(row["abs"]) == pytest.approx(abs(complex(float(row["re"]), float(row["im"]))))
        with open(os.path.join(temp_output_dir, "summary.json"), encoding="utf-8") as f:
            summary = json.load(f)
        assert summary["fits"] == 4
        context = RunContext(config=config)
        for i, entry in enumerate(summary["inputs"]):
            s = context.surface(i)
            assert entry["surface"] == i
            assert entry["surface_hash"] == hashlib.sha256(s.to_json().encode("utf-8")).hexdigest()
            assert entry["observable_hash"] == context.observable(s, i).digest()
        assert summary["inputs"][0]["surface_hash"] != summary["inputs"][1]["surface_hash"]

    async def test_product_flow_smoke(self, temp_output_dir):
        """The product-flow run fits the deviation of every surface and frequency."""
        config = default_config("product-flow", 4, surface_count=2, output_dir=temp_output_dir,
                                T_grid=np.geomspace(10.0, 1000.0, 8).tolist())
        manifest = await run_async(config)
        assert manifest.exit_code == 0
        with open(os.path.join(temp_output_dir, "fits.csv"), newline="", encoding="utf-8") as f:
            fits = list(csv.DictReader(f))
        assert len(fits) == 2 * len(config.lambda_grid)
        assert all(float(row["exponent"]) < 1.5 for row in fits)
        assert os.path.isfile(os.path.join(temp_output_dir, "plot.py"))

    async def test_failed_tasks_give_partial_exit(self, temp_output_dir):
        """Tasks that raise are recorded and the run exits with code 3."""
        config = _sweep_config(temp_output_dir, T_grid=[1.0, 2.0, 3.0])
        manifest = await run_async(config)
        assert len(manifest.failed) == 4
        assert manifest.exit_code == 3
        assert "DegenerateData" in manifest.failed[0].message

    async def test_json_tables(self, temp_output_dir):
        """format=json writes tables as JSON lists."""
        config = default_config("stratum-info", 1, output_dir=temp_output_dir, format="json")
        await run_async(config)
        with open(os.path.join(temp_output_dir, "stratum.json"), encoding="utf-8") as f:
            rows = json.load(f)
        assert rows[0]["genus"] == 2

    async def test_kz_exponents_smoke(self, temp_output_dir):
        """A small torus run estimates exponents near 1 and -1."""
        config = default_config("kz-exponents", 2, stratum="golden-torus", n_paths=2, n_zorich=500,
                                 output_dir=temp_output_dir, threads=2)
        manifest = await run_async(config)
        assert manifest.exit_code == 0
        with open(os.path.join(temp_output_dir, "summary.json"), encoding="utf-8") as f:
            summary = json.load(f)
        assert summary["exponents"][0] == pytest.approx(1.0, abs=0.05)

    @pytest.mark.slow
    async def test_gap_sweep_smoke(self, temp_output_dir):
        """The smoke gap sweep finishes with every task ok."""
        manifest = await run_async(default_config("gap-sweep", 1, output_dir=temp_output_dir))
        assert manifest.exit_code == 0
        assert isinstance(manifest, RunManifest)


class TestCli:
    """Test the command-line interface."""

    def test_parser_has_every_kind(self):
        """One subcommand per experiment kind."""
        parser = build_parser()
        args = parser.parse_args(["spectral", "--seed", "3", "--threads", "2"])
        assert args.kind == "spectral" and args.seed == 3 and args.threads == 2

    async def test_stratum_info_exit_ok(self, temp_output_dir):
        """A valid run exits with 0."""
        code = await main(["stratum-info", "--seed", "1", "--out", temp_output_dir])
        assert code == EXIT_OK
        assert os.path.isfile(os.path.join(temp_output_dir, "manifest.json"))

    async def test_missing_seed(self, temp_output_dir):
        """Without config or seed the CLI exits with 2."""
        assert await main(["stratum-info", "--out", temp_output_dir]) == EXIT_CONFIG

    async def test_kind_mismatch(self, temp_output_dir):
        """A config for another kind exits with 2."""
        path = os.path.join(temp_output_dir, "config.json")
        with open(path, "w", encoding="utf-8") as f:
            f.write(default_config("spectral", 1).to_json())
        assert await main(["stratum-info", "--config", path]) == EXIT_CONFIG

    async def test_invalid_config_file(self, temp_output_dir):
        """Malformed JSON exits with 2."""
        path = os.path.join(temp_output_dir, "config.json")
        with open(path, "w", encoding="utf-8") as f:
            f.write("{not json")
        assert await main(["stratum-info", "--config", path]) == EXIT_CONFIG

    async def test_partial_failure_exit(self, temp_output_dir):
        """Failed tasks exit with 3."""
        path = os.path.join(temp_output_dir, "config.json")
        with open(path, "w", encoding="utf-8") as f:
            f.write(_sweep_config(os.path.join(temp_output_dir, "out"), T_grid=[1.0, 2.0]).to_json())
        assert await main(["twisted-sweep", "--config", path]) == EXIT_PARTIAL

    async def test_planner_rejection_exit(self, temp_output_dir):
        """Configs rejected at planning exit with 2."""
        path = os.path.join(temp_output_dir, "config.json")
        config = default_config("kz-exponents", 1, k_exponents=6, output_dir=os.path.join(temp_output_dir, "out"))
        with open(path, "w", encoding="utf-8") as f:
            f.write(config.to_json())
        assert await main(["kz-exponents", "--config", path]) == EXIT_CONFIG
