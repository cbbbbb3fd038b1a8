"""
Scenario command endpoints for Wind Causality Studio
"""

import logging
from typing import Any, Dict, List, Optional

from fastapi import APIRouter, Depends, HTTPException, status
from fastapi.security.api_key import APIKeyHeader
from pydantic import BaseModel, Field, model_validator

from app.config import parse_resolution, settings
from app.errors import ConfigError, NumericalFailureError, UsageError
from app.output.writers import jsonable
from app.scenario.builtins import builtin_names, get_builtin
from app.scenario.scenario_config import ScenarioConfig, parse_config
from app.tasks import COMMANDS, get_task

logger = logging.getLogger("api")

API_KEY_NAME = "X-API-Key"
api_key_header = APIKeyHeader(name=API_KEY_NAME, auto_error=False)


def get_api_key(api_key: Optional[str] = Depends(api_key_header)):
    # open when no key is configured
    if settings.api_key and api_key != settings.api_key:
        raise HTTPException(status_code=status.HTTP_401_UNAUTHORIZED, detail="Invalid API Key")
    return api_key


# Request/response models
class CommandRequest(BaseModel):
    builtin: Optional[str] = None
    scenario: Optional[str] = Field(default=None, description="Scenario TOML text")
    params: Dict[str, Any] = Field(default_factory=dict)
    resolution: Optional[str] = None
    horizon: Optional[float] = None
    dt: Optional[float] = None
    seed: Optional[int] = None

    @model_validator(mode="after")
    def _one_source(self):
        if (self.builtin is None) == (self.scenario is None):
            raise ValueError("give exactly one of builtin or scenario")
        return self


class CommandResponse(BaseModel):
    task_name: str
    command: str
    result: Dict[str, Any]
    artifacts: List[str]
    status: str


router = APIRouter(prefix="/scenarios", tags=["Scenarios"])


def _config(request: CommandRequest) -> ScenarioConfig:
    if request.builtin is not None:
        try:
            config = get_builtin(request.builtin)
        except KeyError as e:
            raise UsageError(str(e.args[0])) from e
    else:
        config = parse_config(request.scenario)
    try:
        resolution = parse_resolution(request.resolution) if request.resolution else None
    except ValueError as e:
        raise UsageError(str(e)) from e
    return config.with_overrides(resolution=resolution, horizon=request.horizon, dt=request.dt, seed=request.seed)


@router.get("/builtins")
def list_builtins():
    """Names of the built-in scenarios"""
    return {"builtins": builtin_names(), "commands": list(COMMANDS)}


@router.post("/{command}", response_model=CommandResponse, dependencies=[Depends(get_api_key)])
def run_command(command: str, request: CommandRequest):
    """
    Run one command against a scenario and return its JSON payload
    """
    try:
        task = get_task(command)
        result = task.execute(_config(request), request.params)
    except ConfigError as e:
        raise HTTPException(status_code=400, detail=[d.to_dict() for d in e.diagnostics])
    except UsageError as e:
        raise HTTPException(status_code=400, detail=str(e))
    except NumericalFailureError as e:
        raise HTTPException(status_code=422, detail=str(e))
    except Exception as e:
        logger.exception(f"Internal failure in {command}")
        raise HTTPException(status_code=500, detail=str(e))
    return jsonable(result)
