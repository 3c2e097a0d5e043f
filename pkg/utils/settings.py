import os
from dataclasses import dataclass
from functools import lru_cache

from dotenv import load_dotenv
from loguru import logger

from utils.exceptions import ConfigurationError

DEFAULT_BUDGET = 10**8


@dataclass(frozen=True)
class Settings:
    """Runtime knobs read from the environment (or a .env file)"""
    threads: int
    budget: int
    log_level: str = "WARNING"


def _positive_int(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        value = int(raw)
    except ValueError as e:
        raise ConfigurationError(f"{name} must be an integer, got {raw!r}") from e
    if value < 1:
        raise ConfigurationError(f"{name} must be at least 1, got {value}")
    return value


def _log_level(name: str, default: str) -> str:
    raw = os.getenv(name, "").strip()
    level = raw.upper() if raw else default
    try:
        logger.level(level)
    except ValueError as e:
        raise ConfigurationError(f"{name} must be a log level such as DEBUG or INFO, got {raw!r}") from e
    return level


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    """Load settings once per process"""
    load_dotenv()
    return Settings(
        threads=_positive_int("MODHYP_THREADS", os.cpu_count() or 1),
        budget=_positive_int("MODHYP_BUDGET", DEFAULT_BUDGET),
        log_level=_log_level("MODHYP_LOG_LEVEL", "WARNING"),
    )
