"""
Wind Causality Studio - Tasks Package

This package contains one task per command:
- RegionsTask: mild / critical / strong region map
- NormTask: F and F_l values
- BallTask, DistTask, CrosscheckTask: front propagation products
- GeodesicTask: geodesic integration and shooting
- CausalTask: chronological and causal queries
- LadderTask: causal ladder classification
"""

from typing import Dict, Type

from app.errors import UsageError

from .base_task import BaseTask, TaskParams, TaskResult
from .causal_task import CausalTask
from .geodesic_task import GeodesicTask
from .ladder_task import LadderTask
from .norm_task import NormTask
from .reachability_tasks import BallTask, CrosscheckTask, DistTask
from .regions_task import RegionsTask

TASKS: Dict[str, Type[BaseTask]] = {
    task.command: task
    for task in (RegionsTask, NormTask, BallTask, DistTask, GeodesicTask, CausalTask, LadderTask, CrosscheckTask)
}

COMMANDS = tuple(TASKS)


def get_task(command: str) -> BaseTask:
    """
    Task instance for a command name

    Raises:
        UsageError: unknown command
    """
    if command not in TASKS:
        raise UsageError(f"Unknown command {command!r}; choose from {', '.join(COMMANDS)}")
    return TASKS[command]()


__all__ = [
    "BaseTask",
    "BallTask",
    "COMMANDS",
    "CausalTask",
    "CrosscheckTask",
    "DistTask",
    "GeodesicTask",
    "LadderTask",
    "NormTask",
    "RegionsTask",
    "TASKS",
    "TaskParams",
    "TaskResult",
    "get_task",
]
