"""Runtime settings read from the environment (and an optional ``.env`` file)."""
from __future__ import annotations

import os
from dataclasses import dataclass
from functools import lru_cache

from dotenv import load_dotenv

ENV_PREFIX = "BUDGETED_CHORES_"

DEFAULT_ENUMERATION_LIMIT = 25
DEFAULT_DP_CELL_CAP = 10_000_000
DEFAULT_ORACLE_CAP = 10_000_000


@dataclass(frozen=True)
class SearchLimits:
    """Bounds for the exact subset searches used by verifiers and solvers."""

    enumeration_limit: int = DEFAULT_ENUMERATION_LIMIT
    dp_cell_cap: int = DEFAULT_DP_CELL_CAP


@dataclass(frozen=True)
class Settings:
    limits: SearchLimits
    oracle_cap: int = DEFAULT_ORACLE_CAP
    log_level: str = "WARNING"

    @classmethod
    def from_env(cls) -> "Settings":
        load_dotenv()
        limits = SearchLimits(
            enumeration_limit=_int_env("ENUMERATION_LIMIT", DEFAULT_ENUMERATION_LIMIT),
            dp_cell_cap=_int_env("DP_CELL_CAP", DEFAULT_DP_CELL_CAP),
        )
        return cls(
            limits=limits,
            oracle_cap=_int_env("ORACLE_CAP", DEFAULT_ORACLE_CAP),
            log_level=os.getenv(f"{ENV_PREFIX}LOG_LEVEL", "WARNING").upper(),
        )


def _int_env(key: str, default: int) -> int:
    raw = os.getenv(f"{ENV_PREFIX}{key}")
    if raw is None or not raw.strip():
        return default
    try:
        return int(raw.replace("_", ""))
    except ValueError as exc:
        raise ValueError(f"{ENV_PREFIX}{key} must be an integer, got {raw!r}") from exc


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    return Settings.from_env()


def resolve_limits(limits: SearchLimits | None) -> SearchLimits:
    return limits if limits is not None else get_settings().limits


__all__ = ["SearchLimits", "Settings", "get_settings", "resolve_limits"]
