"""
End-to-end experiment runs: plan, dispatch, report, persist.
"""
import asyncio
import logging
import time
from datetime import datetime, timezone

from expcli import __version__
from expcli.context import RunContext
from expcli.dispatcher import dispatch
from expcli.experiment_registry import ExperimentRegistry
from expcli.models import ExperimentConfig, RunManifest, TaskStatus
from expcli.persistence import ArtifactWriter, write_manifest
from expcli.plots import plot_script

logger = logging.getLogger(__name__)


async def run_async(config: ExperimentConfig, verbose: bool = False) -> RunManifest:
    """
    Execute the experiment named by ``config.kind`` and write its artifacts.

    Data files depend only on the config minus output_dir and threads; the
    manifest adds timing and the file index.

    Raises:
        ConfigInvalid: If the config does not suit the experiment
        IoFailure: If the output directory is not writable
    """
    started_at = datetime.now(timezone.utc).isoformat()
    start = time.perf_counter()
    context = RunContext(config=config, verbose=verbose)
    registry = ExperimentRegistry(context)
    tasks = registry.plan(config.kind)
    writer = ArtifactWriter(context.output_dir)
    logger.info(f"Running {config.kind}: {len(tasks)} tasks on {config.threads} threads")

    results = await dispatch(tasks, config.threads)
    output = registry.report(config.kind, results)
    for stem, rows in output.tables.items():
        writer.write_table(stem, rows, config.format)
    writer.write_json("summary.json", output.summary)
    writer.write_text("config.json", config.to_json() + "\n")
    script = plot_script(config.kind, config.format)
    if script is not None:
        writer.write_text("plot.py", script)

    manifest = RunManifest(
        config_hash=config.config_hash(),
        artifact_version=__version__,
        kind=config.kind,
        started_at=started_at,
        wall_time=time.perf_counter() - start,
        tasks=[
            TaskStatus(task_id=list(r.task.task_id), name=r.task.name, status="ok" if r.ok else "failed",
                       message=r.error, wall_time=r.wall_time)
            for r in results
        ],
        files=writer.entries,
    )
    write_manifest(context.output_dir, manifest)
    if manifest.failed:
        logger.warning(f"{len(manifest.failed)} of {len(results)} tasks failed")
    return manifest


def run(config: ExperimentConfig, verbose: bool = False) -> RunManifest:
    """Synchronous wrapper around run_async."""
    return asyncio.run(run_async(config, verbose))
