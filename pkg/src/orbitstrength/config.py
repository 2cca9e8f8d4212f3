"""Scenario files: flat ``key = value`` text.

Example::

    scenario = rieffel
    L = "alt:1,2"
    n_max = 40
    m_max = 8

Unknown keys are errors.  ``#`` starts a comment.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

from .action import (Scenario, make_green, make_kronecker, make_proper, make_rieffel,
                     make_splice, repetition_rule)

__all__ = ["ConfigError", "RunConfig", "parse_config", "load_config", "build_scenario", "GALLERY"]

GALLERY = ("green", "rieffel", "splice-x0", "splice-z0", "kronecker", "proper")

_KEYS = {"scenario", "L", "n_max", "m_max", "window", "tail_start", "slope"}


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    scenario: str
    L: str | None = None
    n_max: int = 40
    m_max: int = 8
    window: float | None = None
    tail_start: int | None = None
    slope: float | None = None


def _unquote(value: str) -> str:
    value = value.strip()
    if len(value) >= 2 and value[0] == value[-1] and value[0] in "\"'":
        return value[1:-1]
    return value


def parse_config(text: str) -> RunConfig:
    raw: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key = key.strip()
        if not sep or not key:
            raise ConfigError(f"line {lineno}: expected 'key = value'")
        if key not in _KEYS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in raw:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        raw[key] = _unquote(value)
    if "scenario" not in raw:
        raise ConfigError("missing required key 'scenario'")
    name = raw["scenario"]
    if name not in GALLERY:
        raise ConfigError(f"unknown scenario {name!r}; choose from {', '.join(GALLERY)}")
    try:
        cfg = RunConfig(
            scenario=name,
            L=raw.get("L"),
            n_max=int(raw.get("n_max", 40)),
            m_max=int(raw.get("m_max", 8)),
            window=float(raw["window"]) if "window" in raw else None,
            tail_start=int(raw["tail_start"]) if "tail_start" in raw else None,
            slope=float(raw["slope"]) if "slope" in raw else None,
        )
    except ValueError as exc:
        raise ConfigError(f"bad numeric value: {exc}") from None
    if cfg.L is not None:
        if name != "rieffel":
            raise ConfigError("key 'L' only applies to scenario = rieffel")
        try:
            repetition_rule(cfg.L)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
    elif name == "rieffel":
        raise ConfigError("scenario = rieffel needs an L rule")
    if cfg.n_max < 1 or cfg.m_max < 1:
        raise ConfigError("n_max and m_max must be positive")
    if cfg.tail_start is not None and not 1 <= cfg.tail_start <= cfg.n_max:
        raise ConfigError("tail_start must lie in [1, n_max]")
    if cfg.window is not None and not (cfg.window > 0 and math.isfinite(cfg.window)):
        raise ConfigError("window must be a positive half-width")
    return cfg


def load_config(path) -> RunConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from None
    return parse_config(text)


def build_scenario(cfg: RunConfig) -> Scenario:
    name = cfg.scenario
    if name == "green":
        return make_green()
    if name == "proper":
        return make_proper()
    if name == "rieffel":
        return make_rieffel(repetition_rule(cfg.L), name=f"rieffel[{cfg.L}]")
    if name in ("splice-x0", "splice-z0"):
        x0, z0 = make_splice()
        return x0 if name == "splice-x0" else z0
    if name == "kronecker":
        try:
            return make_kronecker() if cfg.slope is None else make_kronecker(cfg.slope)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
    raise ConfigError(f"unknown scenario {name!r}")
