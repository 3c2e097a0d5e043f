import json
import sys

from loguru import logger

LOG_FORMAT = " | ".join([
    "<green>{time:YYYY-MM-DD HH:mm:ss.SSS}</green>",
    "<magenta>{elapsed}</magenta>",
    "<level>{level: <8}</level>",
    "<level>{message}</level>",
])


class TrackingService:
    @staticmethod
    def setup_logger(level: str = "WARNING") -> None:
        """Route all diagnostics to stderr; stdout stays reserved for data"""
        logger.remove()
        logger.add(sys.stderr, format=LOG_FORMAT, level=level.upper())

    @staticmethod
    def log_activity(activity_type: str, details: dict | None = None) -> None:
        """Record one command or sweep as a structured log event"""
        logger.bind(activity=activity_type).info(
            "{} {}", activity_type, json.dumps(details or {}, sort_keys=True, default=str)
        )
