"""Run configuration: built-in defaults, environment, config file, flags."""

from __future__ import annotations

import os
from dataclasses import dataclass, fields, replace
from typing import Any, Dict, Mapping, Optional

from dotenv import dotenv_values, load_dotenv

from dirichlet import SliceSettings
from geometry import ConfigError

load_dotenv()

SEED_LIMIT = 1 << 64

ENV_KEYS = {
    "seed": "CYLPACK_SEED",
    "jobs": "CYLPACK_JOBS",
    "area_tol": "CYLPACK_AREA_TOL",
    "membership_tol": "CYLPACK_MEMBERSHIP_TOL",
    "event_tol": "CYLPACK_EVENT_TOL",
    "n_theta": "CYLPACK_N_THETA",
    "output_dir": "CYLPACK_OUTPUT_DIR",
}


@dataclass(frozen=True)
class RunConfig:
    seed: int = 0
    jobs: int = 1
    area_tol: float = 1e-6
    membership_tol: float = 1e-10
    event_tol: float = 1e-9
    n_theta: int = 720
    output_dir: str = "output"
    format: Optional[str] = None
    reproducible: bool = False
    progress: bool = True
    verbose: bool = False

    def __post_init__(self):
        for name in ("area_tol", "membership_tol", "event_tol"):
            if not getattr(self, name) > 0.0:
                raise ConfigError(f"{name} must be positive, got {getattr(self, name)!r}")
        if not 0 <= self.seed < SEED_LIMIT:
            raise ConfigError(f"seed must lie in [0, 2^64), got {self.seed}")
        if self.jobs < 1:
            raise ConfigError(f"jobs must be at least 1, got {self.jobs}")
        if self.n_theta < 16:
            raise ConfigError(f"n_theta must be at least 16, got {self.n_theta}")
        if self.format is not None and self.format not in ("json", "csv", "svg"):
            raise ConfigError(f"unknown format {self.format!r}")

    def slice_settings(self) -> SliceSettings:
        return SliceSettings(
            membership_tol=self.membership_tol,
            area_tol=self.area_tol,
            event_tol=self.event_tol,
            n_theta=self.n_theta,
        )

    @property
    def show_progress(self) -> bool:
        return self.progress and not self.reproducible

    def to_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}


def _coerce(name: str, raw: Any) -> Any:
    kind = {f.name: f.type for f in fields(RunConfig)}[name]
    try:
        if kind == "int":
            return int(str(raw).strip())
        if kind == "float":
            return float(raw)
        if kind == "bool":
            return str(raw).strip().lower() in ("1", "true", "yes", "on")
        return str(raw)
    except ValueError as exc:
        raise ConfigError(f"invalid value for {name}: {raw!r}") from exc


def _from_env(environ: Mapping[str, str]) -> Dict[str, Any]:
    return {name: _coerce(name, environ[key]) for name, key in ENV_KEYS.items() if environ.get(key)}


def _from_file(path: str) -> Dict[str, Any]:
    if not os.path.exists(path):
        raise ConfigError(f"config file not found: {path}")
    known = {f.name for f in fields(RunConfig)}
    values: Dict[str, Any] = {}
    for key, raw in dotenv_values(path).items():
        name = key.lower()
        if name.startswith("cylpack_"):
            name = name[len("cylpack_"):]
        if name not in known:
            raise ConfigError(f"unknown config key {key!r} in {path}")
        if raw is not None:
            values[name] = _coerce(name, raw)
    return values


def build_config(
    flags: Optional[Mapping[str, Any]] = None,
    config_file: Optional[str] = None,
    environ: Optional[Mapping[str, str]] = None,
) -> RunConfig:
    """Defaults < environment < config file < flags; ``None`` flags are ignored."""
    values: Dict[str, Any] = {}
    values.update(_from_env(os.environ if environ is None else environ))
    if config_file:
        values.update(_from_file(config_file))
    values.update({k: v for k, v in (flags or {}).items() if v is not None})
    return replace(RunConfig(), **values)
