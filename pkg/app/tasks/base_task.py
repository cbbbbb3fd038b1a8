"""
Base Task class for Wind Causality Studio

This module provides the foundation for all command tasks. A task validates
its parameters, runs the engines against a scenario, and hands back a JSON
payload plus named artifacts that the CLI writes to --out.
"""

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Annotated, Any, Dict, List, Optional, Tuple, Type

import numpy as np
import pandas as pd
from pydantic import BaseModel, BeforeValidator, ConfigDict, ValidationError

from app.errors import UsageError
from app.output.writers import write_csv, write_json, write_pgm
from app.scenario.scenario_config import ScenarioConfig


def _split(value: Any) -> Any:
    if isinstance(value, str):
        return [float(part) for part in value.split(",")]
    return value


Point = Annotated[Tuple[float, float], BeforeValidator(_split)]
Event = Annotated[Tuple[float, float, float], BeforeValidator(_split)]
NormSample = Annotated[Tuple[float, float, float, float], BeforeValidator(_split)]


class TaskParams(BaseModel):
    """Command parameters; subclasses add fields"""

    model_config = ConfigDict(extra="forbid")


@dataclass
class TaskResult:
    """JSON payload and named artifacts (PGM grids, CSV frames, SVG/JSON text)"""

    payload: Dict[str, Any]
    artifacts: Dict[str, Any] = field(default_factory=dict)


class BaseTask:
    """Base class for all command tasks"""

    command: str = ""
    params_model: Type[TaskParams] = TaskParams

    def __init__(self, name: str, description: str, expected_output: str = ""):
        """
        Initialize base task

        Args:
            name: Task name
            description: Task description
            expected_output: Artifacts the task writes
        """
        self.name = name
        self.description = description
        self.expected_output = expected_output
        self.logger = logging.getLogger(f"task.{name.lower().replace(' ', '_')}")

    def execute(
        self,
        config: ScenarioConfig,
        params: Optional[Dict[str, Any]] = None,
        out: Optional[Path] = None,
    ) -> Dict[str, Any]:
        """
        Execute the task

        Args:
            config: Scenario with command-line overrides applied
            params: Raw command parameters
            out: Artifact directory; nothing is written when None

        Returns:
            Dict containing task execution results
        """
        try:
            self.logger.info(f"Executing task: {self.name} on scenario {config.name!r}")
            parsed = self.validate_input(params or {})
            result = self.run(config, parsed)
            written = self.write_artifacts(result, Path(out)) if out is not None else []
            self.logger.info("Task completed successfully")
            return self._process_result(result, written)

        except Exception as e:
            self.logger.error(f"Error executing task: {str(e)}")
            raise

    def run(self, config: ScenarioConfig, params: TaskParams) -> TaskResult:
        raise NotImplementedError

    def validate_input(self, params: Dict[str, Any]) -> TaskParams:
        """
        Validate command parameters

        Raises:
            UsageError: parameters missing or malformed
        """
        try:
            return self.params_model.model_validate(params)
        except ValidationError as e:
            problems = "; ".join(
                f"{'.'.join(str(p) for p in err['loc']) or self.command}: {err['msg']}" for err in e.errors()
            )
            raise UsageError(f"Invalid parameters for {self.command}: {problems}") from e

    def write_artifacts(self, result: TaskResult, out: Path) -> List[str]:
        """Write every artifact under out, dispatching on its type"""
        out.mkdir(parents=True, exist_ok=True)
        written = []
        for name in sorted(result.artifacts):
            value = result.artifacts[name]
            target = out / name
            if isinstance(value, np.ndarray):
                write_pgm(target, value)
            elif isinstance(value, pd.DataFrame):
                write_csv(target, value)
            elif isinstance(value, str):
                target.write_text(value, encoding="utf-8")
            elif isinstance(value, bytes):
                target.write_bytes(value)
            else:
                write_json(target, value)
            written.append(name)
        return written

    def _process_result(self, result: TaskResult, written: List[str]) -> Dict[str, Any]:
        return {
            "task_name": self.name,
            "command": self.command,
            "result": result.payload,
            "artifacts": written or sorted(result.artifacts),
            "status": "completed",
        }

    def get_task_info(self) -> Dict[str, Any]:
        """
        Get task information

        Returns:
            Dict containing task details
        """
        return {
            "name": self.name,
            "command": self.command,
            "description": self.description,
            "expected_output": self.expected_output,
            "parameters": sorted(self.params_model.model_fields),
        }
