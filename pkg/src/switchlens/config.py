"""Service configuration: JSON file plus SWITCHLENS_* environment overrides.

Precedence: built-in defaults, then the config file, then the environment.
Rational parameters accept both decimal ("0.5") and ratio ("1/2") forms
and are kept exact.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field, replace
from fractions import Fraction
from pathlib import Path
from zoneinfo import ZoneInfo

from .pattern_mining import Discretization, Measure

ENV_PREFIX = "SWITCHLENS_"

DEFAULT_TRAP_HORIZON_S = 7 * 86400.0
DEFAULT_FIRST_REMINDER_S = 900.0
# Mean reported memory-refresh time after a resumption, in seconds.
DEFAULT_RECALL_ESTIMATE_S = 192.0


class ConfigError(ValueError):
    pass


def as_fraction(value) -> Fraction:
    """Exact rational from "1/2", "0.5", 0.5, or an int."""
    try:
        if isinstance(value, float):
            return Fraction(str(value))
        return Fraction(value)
    except (ValueError, ZeroDivisionError, TypeError) as err:
        raise ConfigError(f"not a rational number: {value!r} ({err})") from None


@dataclass(frozen=True)
class ServiceConfig:
    port: int = 8787
    store_path: str | None = None
    trap_horizon_s: float = DEFAULT_TRAP_HORIZON_S
    discretization: Discretization = field(default_factory=Discretization)
    timezone: str = "UTC"
    lexicon_path: str | None = None
    min_support: Fraction = Fraction(1, 2)
    min_confidence: Fraction = Fraction(1, 2)
    sequence_min_support: Fraction = Fraction(1, 2)
    sequence_max_len: int = 4
    first_reminder_s: float = DEFAULT_FIRST_REMINDER_S
    recall_estimate_s: float = DEFAULT_RECALL_ESTIMATE_S

    def __post_init__(self):
        if not 0 < self.port < 65536:
            raise ConfigError(f"port out of range: {self.port}")
        if self.trap_horizon_s <= 0:
            raise ConfigError("trap_horizon_s must be positive")
        if self.first_reminder_s <= 0:
            raise ConfigError("first_reminder_s must be positive")
        for name in ("min_support", "min_confidence", "sequence_min_support"):
            value = getattr(self, name)
            if not 0 < value <= 1:
                raise ConfigError(f"{name} must be in (0, 1], got {value}")
        try:
            ZoneInfo(self.timezone)
        except Exception:
            raise ConfigError(f"unknown timezone {self.timezone!r}") from None

    @property
    def tzinfo(self) -> ZoneInfo:
        return ZoneInfo(self.timezone)


def _parse_discretization(obj) -> Discretization:
    if not isinstance(obj, dict):
        raise ConfigError("discretization must be an object")
    mode = obj.get("mode", "median")
    thresholds = {}
    for name, value in obj.get("thresholds", {}).items():
        try:
            measure = Measure(name)
        except ValueError:
            raise ConfigError(f"unknown measure {name!r} in thresholds") from None
        if not isinstance(value, (int, float)) or isinstance(value, bool):
            raise ConfigError(f"threshold for {name!r} must be a number")
        thresholds[measure] = float(value)
    try:
        return Discretization(mode=mode, thresholds=thresholds)
    except ValueError as err:
        raise ConfigError(str(err)) from None


_FILE_KEYS = {
    "port": int,
    "store_path": str,
    "trap_horizon_s": float,
    "timezone": str,
    "lexicon_path": str,
    "sequence_max_len": int,
    "first_reminder_s": float,
    "recall_estimate_s": float,
}
_FRACTION_KEYS = ("min_support", "min_confidence", "sequence_min_support")


def _apply_file(config: ServiceConfig, path: Path) -> ServiceConfig:
    try:
        obj = json.loads(path.read_text(encoding="utf-8"))
    except OSError as err:
        raise ConfigError(f"cannot read config file: {err}") from None
    except json.JSONDecodeError as err:
        raise ConfigError(f"config file is not valid JSON: {err.msg}") from None
    if not isinstance(obj, dict):
        raise ConfigError("config file must hold a JSON object")

    updates = {}
    for key, value in obj.items():
        if key in _FRACTION_KEYS:
            updates[key] = as_fraction(value)
        elif key == "discretization":
            updates[key] = _parse_discretization(value)
        elif key in _FILE_KEYS:
            wanted = _FILE_KEYS[key]
            if wanted is float and isinstance(value, int) and not isinstance(value, bool):
                value = float(value)
            if not isinstance(value, wanted) or isinstance(value, bool):
                raise ConfigError(f"config key {key!r} must be {wanted.__name__}")
            updates[key] = value
        else:
            raise ConfigError(f"unknown config key {key!r}")
    return replace(config, **updates)


def _apply_env(config: ServiceConfig, env: dict[str, str]) -> ServiceConfig:
    updates = {}
    for key in _FILE_KEYS:
        raw = env.get(ENV_PREFIX + key.upper())
        if raw is None:
            continue
        wanted = _FILE_KEYS[key]
        if wanted in (int, float):
            try:
                updates[key] = wanted(raw)
            except ValueError:
                raise ConfigError(f"{ENV_PREFIX}{key.upper()} must be {wanted.__name__}") from None
        else:
            updates[key] = raw
    for key in _FRACTION_KEYS:
        raw = env.get(ENV_PREFIX + key.upper())
        if raw is not None:
            updates[key] = as_fraction(raw)
    raw = env.get(ENV_PREFIX + "DISCRETIZATION_MODE")
    if raw is not None:
        base = updates.get("discretization", config.discretization)
        try:
            updates["discretization"] = Discretization(mode=raw, thresholds=base.thresholds)
        except ValueError as err:
            raise ConfigError(str(err)) from None
    return replace(config, **updates)


def load_config(path: str | Path | None = None, env: dict[str, str] | None = None) -> ServiceConfig:
    """Resolve configuration from defaults, an optional file, and the environment."""
    config = ServiceConfig()
    if path is not None:
        config = _apply_file(config, Path(path))
    config = _apply_env(config, os.environ if env is None else env)
    return config
