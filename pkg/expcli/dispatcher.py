"""
Bounded-parallel execution of experiment tasks.

Tasks run on a thread pool driven from asyncio; a failing task is logged and
recorded, never propagated, and results come back in task-id order.
"""
import asyncio
import logging
import time
from concurrent.futures import ThreadPoolExecutor
from typing import List, Sequence

from expcli.experiment_registry import Task, TaskResult

logger = logging.getLogger(__name__)


def run_task(task: Task) -> TaskResult:
    """Run one task, capturing any exception into the result."""
    start = time.perf_counter()
    try:
        logger.debug(f"Starting task {task.name}")
        value = task.fn()
        logger.info(f"Task {task.name} finished")
        return TaskResult(task=task, value=value, wall_time=time.perf_counter() - start)
    except Exception as e:
        logger.error(f"Task {task.name} failed: {type(e).__name__}: {e}")
        return TaskResult(task=task, error=f"{type(e).__name__}: {e}", wall_time=time.perf_counter() - start)


async def dispatch(tasks: Sequence[Task], threads: int = 1) -> List[TaskResult]:
    """
    Run every task on at most ``threads`` worker threads.

    Args:
        tasks: Independent tasks
        threads: Pool size (>= 1)

    Returns:
        One result per task, sorted by task id
    """
    if threads < 1:
        raise ValueError(f"threads must be at least 1, got {threads}")
    loop = asyncio.get_running_loop()
    with ThreadPoolExecutor(max_workers=threads) as pool:
        futures = [loop.run_in_executor(pool, run_task, task) for task in tasks]
        results = await asyncio.gather(*futures)
    return sorted(results, key=lambda r: r.task.task_id)
