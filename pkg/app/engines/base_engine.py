"""
Base Engine class for Wind Causality Studio

This module provides the foundation for all numerical engines in the studio.
It includes common functionality like logging, error handling, and a worker
pool for embarrassingly parallel probe batches.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Callable, Dict, Iterable, List, Optional, TypeVar

from app.config import settings

T = TypeVar("T")
R = TypeVar("R")


class BaseEngine:
    """Base class for all numerical engines"""

    def __init__(self, name: str, role: str, max_workers: Optional[int] = None):
        """
        Initialize base engine

        Args:
            name: Engine name
            role: Engine role description
            max_workers: Worker pool size, defaults to settings.max_workers
        """
        self.name = name
        self.role = role
        self.max_workers = max_workers or settings.max_workers
        self.logger = logging.getLogger(f"engine.{name.lower()}")

    def execute(self, operation: str, func: Callable[..., R], *args: Any, **kwargs: Any) -> R:
        """
        Run one engine operation with logging

        Args:
            operation: Operation name used in log lines
            func: Callable doing the work

        Returns:
            Whatever func returns
        """
        try:
            self.logger.info(f"Running {operation}")
            result = func(*args, **kwargs)
            self.logger.info(f"{operation} completed")
            return result

        except Exception as e:
            self.logger.error(f"Error in {operation}: {str(e)}")
            raise

    def map_parallel(self, func: Callable[[T], R], items: Iterable[T]) -> List[R]:
        """
        Apply func to every item on the worker pool, preserving input order

        Args:
            func: Independent per-item job
            items: Job inputs

        Returns:
            List of results in input order
        """
        items = list(items)
        if self.max_workers <= 1 or len(items) <= 1:
            return [func(item) for item in items]
        with ThreadPoolExecutor(max_workers=self.max_workers) as pool:
            return list(pool.map(func, items))

    def get_engine_info(self) -> Dict[str, Any]:
        """
        Get engine information

        Returns:
            Dict containing engine details
        """
        return {
            "name": self.name,
            "role": self.role,
            "max_workers": self.max_workers,
        }
