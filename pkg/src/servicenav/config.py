"""Runtime configuration: flags and environment, nothing ambient.

Every knob the service reads lives here, including the fixed-clock
override that makes acceptance runs reproducible. Environment variables
use the SERVICENAV_ prefix; CLI flags win over the environment.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from datetime import datetime
from pathlib import Path
from zoneinfo import ZoneInfo

from servicenav import data as fixture_data
from servicenav.geo import DEFAULT_RADIUS_M
from servicenav.hours import TIMEZONE, ClockContext
from servicenav.ir import DEFAULT_LIMIT
from servicenav.sessions import DEFAULT_TTL_SECONDS

_ENV_PREFIX = "SERVICENAV_"


def parse_clock(value: str) -> ClockContext:
    """ISO-8601 local timestamp -> clock context (America/New_York)."""
    dt = datetime.fromisoformat(value)
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=ZoneInfo(TIMEZONE))
    return ClockContext.from_datetime(dt.astimezone(ZoneInfo(TIMEZONE)))


@dataclass
class ServiceConfig:
    dataset_path: Path = field(default_factory=lambda: fixture_data.path("dataset.json"))
    gazetteer_path: Path = field(default_factory=lambda: fixture_data.path("gazetteer.json"))
    lexicon_path: Path = field(default_factory=lambda: fixture_data.path("lexicon.json"))
    host: str = "127.0.0.1"
    port: int = 8040
    session_ttl_seconds: float = DEFAULT_TTL_SECONDS
    default_radius_m: float = DEFAULT_RADIUS_M
    default_limit: int = DEFAULT_LIMIT
    fixed_clock: str | None = None  # ISO-8601; None means real time
    cors_origin: str = "*"

    def clock(self) -> ClockContext:
        if self.fixed_clock:
            return parse_clock(self.fixed_clock)
        return ClockContext.from_datetime(datetime.now(ZoneInfo(TIMEZONE)))

    @classmethod
    def from_env(cls, **overrides) -> "ServiceConfig":
        cfg = cls()

        def env(name: str) -> str | None:
            return os.environ.get(_ENV_PREFIX + name)

        if v := env("DATASET"):
            cfg.dataset_path = Path(v)
        if v := env("GAZETTEER"):
            cfg.gazetteer_path = Path(v)
        if v := env("LEXICON"):
            cfg.lexicon_path = Path(v)
        if v := env("HOST"):
            cfg.host = v
        if v := env("PORT"):
            cfg.port = int(v)
        if v := env("SESSION_TTL_SECONDS"):
            cfg.session_ttl_seconds = float(v)
        if v := env("RADIUS_MILES"):
            cfg.default_radius_m = float(v) * 1609.344
        if v := env("LIMIT"):
            cfg.default_limit = int(v)
        if v := env("FIXED_CLOCK"):
            cfg.fixed_clock = v
        if v := env("CORS_ORIGIN"):
            cfg.cors_origin = v
        for key, value in overrides.items():
            if value is not None:
                setattr(cfg, key, value)
        return cfg
