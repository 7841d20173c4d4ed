import logging
import time
from datetime import datetime
from typing import Any, Dict, List

import pandas as pd

from src.utils.config import Config

logging.basicConfig(level=Config.LOG_LEVEL)
logger = logging.getLogger(__name__)


class PerformanceMonitor:
    """Time one selfcheck or table run"""

    def __init__(self, name: str = 'run'):
        self.name = name
        self.start_time = None
        self.metrics: Dict[str, Any] = {}

    def start(self) -> None:
        """Start monitoring"""
        self.start_time = time.perf_counter()
        logger.debug(f"Timing {self.name}")

    def stop(self) -> Dict[str, Any]:
        """Stop monitoring and return metrics"""
        if self.start_time is None:
            raise ValueError("Monitor not started")

        execution_time = time.perf_counter() - self.start_time

        self.metrics = {
            'name': self.name,
            'execution_time_seconds': round(execution_time, 3),
            'timestamp': datetime.now().isoformat(),
        }

        logger.info(f"{self.name} finished in {execution_time:.2f}s")
        return self.metrics


class RunMetrics:
    """Collect timings of several monitored runs"""

    def __init__(self) -> None:
        self.history: List[Dict[str, Any]] = []

    def record(self, metrics: Dict[str, Any], **extra: Any) -> Dict[str, Any]:
        entry = {**metrics, **extra}
        self.history.append(entry)
        return entry

    def to_frame(self) -> pd.DataFrame:
        """Timings as a DataFrame, one row per run"""
        if not self.history:
            return pd.DataFrame()

        return pd.DataFrame(self.history)
