"""Strict experiment configuration files.

A config is TOML with a ``command`` key, a ``[domain]`` table and one table
named after the command holding its parameters::

    command = "hardy"

    [domain]
    builtin = "unit_square"

    [hardy]
    h = 0.00390625
    levels = 3

Unknown keys anywhere are errors.
"""
from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, PositiveFloat, field_validator, model_validator

from .domains import domain_from_mapping, load_domain, tomllib
from .geometry import Domain

COMMANDS = ("hardy", "sector", "barta", "decay", "converge", "trace", "mdist", "minkowski")


def _monotone(values):
    if len(values) > 1:
        steps = [b - a for a, b in zip(values, values[1:])]
        if not (all(s > 0 for s in steps) or all(s < 0 for s in steps)):
            raise ValueError("series must be strictly monotone")
    return values


def _positive_series(values):
    if any(not v > 0 for v in values):
        raise ValueError("series entries must be positive")
    return _monotone(values)


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


class HardyParams(_Strict):
    h: PositiveFloat
    levels: int = Field(3, ge=1)
    s: float = Field(2.0, gt=0, le=3)
    a_series: list[float] = [0.0]
    weight: Literal["lattice", "d", "m"] = "lattice"

    @field_validator("a_series")
    @classmethod
    def _shifts(cls, v):
        if any(a < 0 for a in v):
            raise ValueError("shifts must be nonnegative")
        return _monotone(v)


class SectorParams(_Strict):
    beta_series: list[float]
    h: PositiveFloat
    levels: int = Field(3, ge=1)

    @field_validator("beta_series")
    @classmethod
    def _angles(cls, v):
        if any(not 0 < b <= 2 * math.pi - 0.01 for b in v):
            raise ValueError("sector angles must lie in (0, 2 pi - 0.01]")
        return _monotone(v)


class BartaParams(_Strict):
    h: PositiveFloat
    profile: Literal["interval_sqrt", "sqrt_distance"]
    tol: Optional[PositiveFloat] = None
    n_tests: int = Field(20, ge=1)


class DecayParams(_Strict):
    h: PositiveFloat
    eps_series: list[float] = [0.2, 0.1, 0.05, 0.025]
    n_max: int = Field(6, ge=1)
    c: Optional[float] = Field(None, ge=2)
    a: float = Field(0.0, ge=0)
    hardy_h: Optional[PositiveFloat] = None
    hardy_levels: int = Field(3, ge=1)

    @field_validator("eps_series")
    @classmethod
    def _series(cls, v):
        return _positive_series(v)


class ConvergeParams(_Strict):
    eps_series: list[float]
    h: Optional[PositiveFloat] = None
    h_ratio: Optional[PositiveFloat] = None
    n_max: int = Field(1, ge=1)
    c: float = Field(2.0, ge=2)

    @field_validator("eps_series")
    @classmethod
    def _series(cls, v):
        return _positive_series(v)

    @model_validator(mode="after")
    def _one_spacing(self):
        if (self.h is None) == (self.h_ratio is None):
            raise ValueError("give exactly one of h and h_ratio")
        return self


class TraceParams(_Strict):
    h: PositiveFloat
    t_series: list[float]
    quad_h: PositiveFloat
    lambda_cut: PositiveFloat
    k: int = Field(60, ge=1)
    n_dirs: int = Field(360, ge=4)
    grid_h: Optional[PositiveFloat] = None

    @field_validator("t_series")
    @classmethod
    def _series(cls, v):
        return _positive_series(v)


class MdistParams(_Strict):
    grid_h: PositiveFloat
    n_dirs: int = Field(360, ge=4)
    h: Optional[PositiveFloat] = None


class MinkowskiParams(_Strict):
    eps_series: list[float]
    quad_h: PositiveFloat
    h: Optional[PositiveFloat] = None
    levels: int = Field(3, ge=1)
    tol: float = Field(0.1, ge=0)

    @field_validator("eps_series")
    @classmethod
    def _series(cls, v):
        return _positive_series(v)


PARAMS = {
    "hardy": HardyParams,
    "sector": SectorParams,
    "barta": BartaParams,
    "decay": DecayParams,
    "converge": ConvergeParams,
    "trace": TraceParams,
    "mdist": MdistParams,
    "minkowski": MinkowskiParams,
}



@dataclass(frozen=True)
class ExperimentConfig:
    command: str
    domain: Optional[Domain]
    params: _Strict
    output: Optional[str] = None
    sha256: str = ""


class ConfigError(ValueError):
    """Malformed or invalid experiment configuration."""


def parse_config(text: str, base_dir: Path | str = ".") -> ExperimentConfig:
    try:
        raw = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"invalid TOML: {exc}") from exc
    command = raw.pop("command", None)
    if command not in PARAMS:
        raise ConfigError(f"command must be one of {', '.join(COMMANDS)}; got {command!r}")
    output = raw.pop("output", None)
    dom_spec = raw.pop("domain", None)
    section = raw.pop(command, {})
    if raw:
        raise ConfigError(f"unknown top-level keys {sorted(raw)}")
    try:
        params = PARAMS[command].model_validate(section)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    domain = None
    if command != "sector":
        if dom_spec is None:
            raise ConfigError("missing [domain] table")
        try:
            if set(dom_spec) == {"file"}:
                domain = load_domain(Path(base_dir) / dom_spec["file"])
            else:
                domain = domain_from_mapping(dom_spec)
        except (ValueError, TypeError, KeyError, OSError) as exc:
            raise ConfigError(f"bad domain: {exc}") from exc
    elif dom_spec is not None:
        raise ConfigError("the sector command builds its own domains; remove [domain]")
    return ExperimentConfig(
        command=command,
        domain=domain,
        params=params,
        output=output,
        sha256=hashlib.sha256(text.encode()).hexdigest(),
    )


def load_config(path) -> ExperimentConfig:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from exc
    return parse_config(text, base_dir=path.parent)
