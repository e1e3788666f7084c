"""Experiment configuration: one declarative JSON document per experiment."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from .balls import DEFAULT_BALL_BUDGET
from .errors import ConfigError
from .groups import parse_family

KINDS = ("ball", "star-verify", "calibrate", "decomp-count", "rd-profile",
         "opnorm", "tmap-verify", "trace")

_TMAP_KINDS = ("z2-median", "polygrowth-shortest-side", "derived-from-star")


@dataclass
class ExperimentConfig:
    kind: str
    group: str
    seed: int = 0
    budget: int = DEFAULT_BALL_BUDGET
    generator_order: Optional[list] = None
    peripherals: Optional[str] = None
    sigma: Optional[int] = None
    delta: Optional[int] = None
    radius: Optional[int] = None
    all_geodesics: bool = False
    sigma_max: Optional[int] = None
    delta_max: Optional[int] = None
    p_max: Optional[int] = None
    r1_max: Optional[int] = None
    r2_max: Optional[int] = None
    r_max: Optional[int] = None
    restarts: int = 50
    tol: float = 1e-9
    x: Optional[dict] = None
    r_values: Optional[list] = None
    tmap: Optional[str] = None
    samples: int = 50

    def echo(self) -> dict:
        """The semantic fields, for embedding in reports."""
        out = {}
        for key, value in self.__dict__.items():
            if value is None:
                continue
            out[key] = value
        return out


def _need(raw: dict, key: str, types, what: str):
    if key not in raw:
        raise ConfigError(key, f"required for kind {what!r}")
    value = raw[key]
    if not isinstance(value, types):
        raise ConfigError(key, f"expected {types}, got {type(value).__name__}")
    return value


def _opt(raw: dict, key: str, types, default=None):
    if key not in raw:
        return default
    value = raw[key]
    if not isinstance(value, types):
        raise ConfigError(key, f"expected {types}, got {type(value).__name__}")
    return value


def validate_config(raw: dict) -> ExperimentConfig:
    if not isinstance(raw, dict):
        raise ConfigError("<root>", "config must be a JSON object")
    kind = _need(raw, "kind", str, "<any>")
    if kind not in KINDS:
        raise ConfigError("kind", f"unknown kind {kind!r}; expected one of {KINDS}")
    group = _need(raw, "group", str, kind)
    try:
        parse_family(group)
    except Exception as exc:
        raise ConfigError("group", str(exc))
    cfg = ExperimentConfig(kind=kind, group=group)
    cfg.seed = _opt(raw, "seed", int, 0)
    cfg.budget = _opt(raw, "budget", int, DEFAULT_BALL_BUDGET)
    cfg.generator_order = _opt(raw, "generator_order", list)
    cfg.peripherals = _opt(raw, "peripherals", str)
    if cfg.peripherals is not None and cfg.peripherals not in ("trivial", "factors"):
        raise ConfigError("peripherals", f"unknown descriptor {cfg.peripherals!r}")

    if kind == "ball":
        cfg.radius = _need(raw, "radius", int, kind)
    elif kind == "star-verify":
        cfg.peripherals = _need(raw, "peripherals", str, kind)
        cfg.sigma = _need(raw, "sigma", int, kind)
        cfg.delta = _need(raw, "delta", int, kind)
        cfg.radius = _need(raw, "radius", int, kind)
        cfg.all_geodesics = _opt(raw, "all_geodesics", bool, False)
    elif kind == "calibrate":
        cfg.peripherals = _need(raw, "peripherals", str, kind)
        cfg.radius = _need(raw, "radius", int, kind)
        cfg.sigma_max = _need(raw, "sigma_max", int, kind)
        cfg.delta_max = _need(raw, "delta_max", int, kind)
    elif kind == "decomp-count":
        cfg.peripherals = _need(raw, "peripherals", str, kind)
        cfg.sigma = _need(raw, "sigma", int, kind)
        cfg.delta = _need(raw, "delta", int, kind)
        cfg.p_max = _need(raw, "p_max", int, kind)
        cfg.r1_max = _need(raw, "r1_max", int, kind)
    elif kind == "rd-profile":
        cfg.r_max = _need(raw, "r_max", int, kind)
        cfg.restarts = _opt(raw, "restarts", int, 50)
        cfg.tol = float(_opt(raw, "tol", (int, float), 1e-9))
    elif kind == "opnorm":
        cfg.x = _need(raw, "x", dict, kind)
        xtype = cfg.x.get("type")
        if xtype == "sphere":
            if not isinstance(cfg.x.get("r"), int):
                raise ConfigError("x.r", "sphere indicator needs an integer radius")
        elif xtype == "delta":
            if not isinstance(cfg.x.get("word"), str):
                raise ConfigError("x.word", "delta needs a word string")
        else:
            raise ConfigError("x.type", "expected 'sphere' or 'delta'")
        cfg.r_values = _need(raw, "r_values", list, kind)
        if not cfg.r_values or not all(isinstance(r, int) and r >= 0 for r in cfg.r_values):
            raise ConfigError("r_values", "expected a nonempty list of nonnegative ints")
        cfg.tol = float(_opt(raw, "tol", (int, float), 1e-8))
    elif kind == "tmap-verify":
        cfg.tmap = _need(raw, "tmap", str, kind)
        if cfg.tmap not in _TMAP_KINDS:
            raise ConfigError("tmap", f"unknown tmap kind {cfg.tmap!r}")
        cfg.radius = _need(raw, "radius", int, kind)
        if cfg.tmap == "derived-from-star":
            cfg.peripherals = _need(raw, "peripherals", str, kind)
            cfg.sigma = _need(raw, "sigma", int, kind)
            cfg.delta = _need(raw, "delta", int, kind)
    elif kind == "trace":
        cfg.peripherals = _need(raw, "peripherals", str, kind)
        cfg.sigma = _need(raw, "sigma", int, kind)
        cfg.delta = _need(raw, "delta", int, kind)
        cfg.r1_max = _need(raw, "r1_max", int, kind)
        cfg.r2_max = _need(raw, "r2_max", int, kind)
        cfg.samples = _opt(raw, "samples", int, 50)
    return cfg


def load_config(source) -> ExperimentConfig:
    """Load and validate a config from a path, JSON text, or dict."""
    if isinstance(source, ExperimentConfig):
        return source
    if isinstance(source, dict):
        return validate_config(source)
    path = Path(source)
    if path.exists():
        text = path.read_text()
    else:
        text = str(source)
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError("<file>", f"not valid JSON: {exc}")
    return validate_config(raw)
