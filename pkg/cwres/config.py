"""
Runtime settings for cwres.

Values come from the environment (optionally seeded from a .env file):
- CWRES_THREADS: cap on concurrent workers (threads, so pure-Python homology still shares the GIL)
- CWRES_SPARSE_THRESHOLD: matrices with more entries than this are eliminated in sparse form
- CWRES_LOG_LEVEL: logging level for the CLI
"""

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, List, TypeVar

from dotenv import load_dotenv
from pydantic import BaseModel, Field, ValidationError, field_validator

from cwres.errors import ConfigError

T = TypeVar("T")
R = TypeVar("R")

_ENV_FIELDS = {
    "threads": "CWRES_THREADS",
    "sparse_threshold": "CWRES_SPARSE_THRESHOLD",
    "log_level": "CWRES_LOG_LEVEL",
}


class Settings(BaseModel):
    threads: int = Field(default_factory=lambda: os.cpu_count() or 1, ge=1)
    sparse_threshold: int = Field(default=4096, ge=0)
    log_level: str = "WARNING"

    @field_validator("log_level")
    @classmethod
    def _known_level(cls, value: str) -> str:
        value = value.upper()
        if value not in {"DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"}:
            raise ValueError(f"unknown log level {value}")
        return value

    @classmethod
    def from_env(cls) -> "Settings":
        """Build settings from the process environment."""
        load_dotenv()
        values = {
            name: os.environ[var]
            for name, var in _ENV_FIELDS.items()
            if os.environ.get(var)
        }
        try:
            return cls(**values)
        except ValidationError as e:
            first = e.errors()[0]
            var = _ENV_FIELDS.get(str(first["loc"][0]), "environment")
            raise ConfigError(first["msg"], location=var) from e


def parallel_map(fn: Callable[[T], R], items: Iterable[T]) -> List[R]:
    """
    Map fn over items, keeping order, on at most `settings.threads` threads.

    This bounds concurrency only; pure-Python work does not get faster under
    the GIL.
    """
    items = list(items)
    if settings.threads <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=settings.threads) as pool:
        return list(pool.map(fn, items))


# Global settings instance
settings = Settings.from_env()
