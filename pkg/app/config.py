"""
Configuration module for Wind Causality Studio

This module handles process-wide settings:
- Logging level and worker pool size
- Default grid resolution, horizon and random seed
- Probe counts for the causal ladder classifier
- Memory budget for reachability snapshots
- Optional API key for the HTTP service

Scenario descriptions (domain, norms, wind) live in scenario files, not here.
"""

import logging
import os
from typing import Optional, Tuple
from pydantic import BaseModel
from dotenv import load_dotenv

# Load environment variables from .env file
load_dotenv()

ENV_PREFIX = "WINDCAUS_"


def _env(name: str, default: str) -> str:
    return os.getenv(f"{ENV_PREFIX}{name}", default)


class Settings(BaseModel):
    """Application settings with validation and defaults"""

    # Application Configuration
    debug: bool = False
    log_level: str = "INFO"
    max_workers: int = 4
    output_dir: str = "out"

    # Numerics defaults
    default_resolution: Tuple[int, int] = (128, 128)
    default_horizon: float = 2.0
    default_seed: int = 7
    snapshot_budget_mb: float = 256.0
    critical_tolerance: float = 1e-6

    # Ladder probe counts
    reflexivity_probes: int = 50
    wconvex_probes: int = 50
    hyperbolicity_probes: int = 30
    completeness_probes: int = 100
    sampler_count: int = 10000

    # Security Configuration
    api_key: Optional[str] = None

    @classmethod
    def from_env(cls) -> "Settings":
        """Create settings from environment variables"""
        return cls(
            debug=_env("DEBUG", "False").lower() == "true",
            log_level=_env("LOG_LEVEL", "INFO").upper(),
            max_workers=int(_env("MAX_WORKERS", "4")),
            output_dir=_env("OUTPUT_DIR", "out"),
            default_resolution=parse_resolution(_env("DEFAULT_RESOLUTION", "128x128")),
            default_horizon=float(_env("DEFAULT_HORIZON", "2.0")),
            default_seed=int(_env("DEFAULT_SEED", "7")),
            snapshot_budget_mb=float(_env("SNAPSHOT_BUDGET_MB", "256")),
            critical_tolerance=float(_env("CRITICAL_TOLERANCE", "1e-6")),
            reflexivity_probes=int(_env("REFLEXIVITY_PROBES", "50")),
            wconvex_probes=int(_env("WCONVEX_PROBES", "50")),
            hyperbolicity_probes=int(_env("HYPERBOLICITY_PROBES", "30")),
            completeness_probes=int(_env("COMPLETENESS_PROBES", "100")),
            sampler_count=int(_env("SAMPLER_COUNT", "10000")),
            api_key=_env("API_KEY", "") or None,
        )


def parse_resolution(text: str) -> Tuple[int, int]:
    """
    Parse an ``NxM`` resolution string

    Args:
        text: Resolution such as ``256x256``

    Returns:
        Tuple of (columns, rows)
    """
    parts = text.lower().replace(" ", "").split("x")
    if len(parts) != 2:
        raise ValueError(f"Resolution must look like NxM, got {text!r}")
    nx, ny = int(parts[0]), int(parts[1])
    return nx, ny


# Global settings instance
settings = Settings.from_env()


def get_settings() -> Settings:
    """Get application settings instance"""
    return settings


def configure_logging(level: Optional[str] = None) -> None:
    """Configure the root logger from settings (diagnostics go to stderr)"""
    logging.basicConfig(
        level=getattr(logging, (level or settings.log_level).upper(), logging.INFO),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )


def validate_environment() -> bool:
    """
    Validate that configured values are usable

    Returns:
        bool: True if every setting is usable, False otherwise
    """
    problems = []
    if settings.max_workers < 1:
        problems.append("WINDCAUS_MAX_WORKERS must be >= 1")
    if not isinstance(logging.getLevelName(settings.log_level), int):
        problems.append(f"WINDCAUS_LOG_LEVEL {settings.log_level!r} is not a logging level")
    if min(settings.default_resolution) < 16:
        problems.append("WINDCAUS_DEFAULT_RESOLUTION must be at least 16x16")
    if settings.sampler_count < 100:
        problems.append("WINDCAUS_SAMPLER_COUNT must be at least 100")
    if settings.snapshot_budget_mb <= 0:
        problems.append("WINDCAUS_SNAPSHOT_BUDGET_MB must be positive")

    if problems:
        logging.getLogger("config").warning(f"Unusable settings: {', '.join(problems)}")
        return False

    return True
