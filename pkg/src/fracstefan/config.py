"""Sectioned run configuration: parsing, validation, canonical rendering.

The on-disk format is INI-style sections with JSON scalar values, chosen
so manifests stay human-diffable while numbers survive a round trip
bit-exactly.  parse_config(render_config(c)) == c holds for every valid
configuration; unknown sections or keys are hard errors so a typo cannot
silently fall back to a default.
"""

from __future__ import annotations

import configparser
import io
import json
import math
from dataclasses import dataclass, replace

from .stencil import power_tail


class ConfigError(ValueError):
    """Invalid, unknown, or missing configuration content."""


@dataclass(frozen=True)
class Config:
    """Fully resolved run configuration; every field has a canonical value."""

    # problem
    s: float
    L: float = 1.0
    P1: float = 1.0
    P2: float = 1.0
    law: str = "one"
    datum: str = "step"
    k1: float = 1.0
    k2: float = 1.0
    box_height: float = 1.0
    box_radius: float = 1.0
    # grid
    dx: float = 0.05
    domain_radius: float = 20.0
    init: str = "pointwise"
    # operator
    weights_backend: str = "power"
    method: str = "auto"
    window_G: int | None = None
    # time
    t_final: float = 1.0
    theta: float = 0.9
    snapshots: tuple = ()
    # output
    root: str | None = None


SECTION_LAYOUT = {
    "problem": ("s", "L", "P1", "P2", "law", "datum", "k1", "k2",
                "box_height", "box_radius"),
    "grid": ("dx", "domain_radius", "init"),
    "operator": ("weights_backend", "method", "window_G"),
    "time": ("t_final", "theta", "snapshots"),
    "output": ("root",),
}

_ALIASES = {"latent_heat": "L"}
_REQUIRED = ("s",)
_FLOAT_KEYS = {"s", "L", "P1", "P2", "k1", "k2", "box_height", "box_radius",
               "dx", "domain_radius", "t_final", "theta"}
_ENUMS = {
    "law": ("one", "two", "identity"),
    "datum": ("step", "box"),
    "init": ("pointwise", "cell_average"),
    "weights_backend": ("power", "quadrature"),
    "method": ("auto", "direct", "fft"),
}
_KEY_SECTION = {k: sec for sec, keys in SECTION_LAYOUT.items() for k in keys}


def _coerce(key: str, value, where: str):
    if key in _FLOAT_KEYS:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f"{where}: {key} must be a number, got {value!r}")
        return float(value)
    if key in _ENUMS:
        if value not in _ENUMS[key]:
            raise ConfigError(
                f"{where}: {key} must be one of {_ENUMS[key]}, got {value!r}")
        return value
    if key == "window_G":
        if value is None:
            return None
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError(f"{where}: window_G must be an integer or null")
        return int(value)
    if key == "snapshots":
        if not isinstance(value, (list, tuple)):
            raise ConfigError(f"{where}: snapshots must be a list of times")
        try:
            return tuple(float(t) for t in value)
        except (TypeError, ValueError):
            raise ConfigError(f"{where}: snapshots must be numbers")
    if key == "root":
        if value is None or isinstance(value, str):
            return value
        raise ConfigError(f"{where}: root must be a string or null")
    raise ConfigError(f"{where}: unknown key {key}")


def _parse_scalar(raw: str):
    try:
        return json.loads(raw)
    except json.JSONDecodeError:
        return raw.strip()


def parse_config(source: str = None, text: str = None,
                 overrides: dict = None) -> Config:
    """Read a config file (or literal text), apply overrides, validate.

    overrides maps "key" or "section.key" to a raw string in the same
    JSON-scalar syntax as file values; they win over file content.
    Missing required keys, unknown keys, and out-of-range values raise
    ConfigError naming the field.
    """
    values = {}
    if source is not None or text is not None:
        cp = configparser.ConfigParser(interpolation=None)
        cp.optionxform = str
        if text is None:
            try:
                with open(source, "r", encoding="utf-8") as fh:
                    text = fh.read()
            except OSError as exc:
                raise ConfigError(f"cannot read config: {exc}")
        try:
            cp.read_string(text)
        except configparser.Error as exc:
            raise ConfigError(f"malformed config: {exc}")
        for section in cp.sections():
            if section not in SECTION_LAYOUT:
                raise ConfigError(f"unknown section [{section}]")
            for key, raw in cp.items(section):
                key = _ALIASES.get(key, key)
                if key not in SECTION_LAYOUT[section]:
                    raise ConfigError(f"unknown key {key} in [{section}]")
                values[key] = _coerce(key, _parse_scalar(raw), f"[{section}]")
    for full_key, raw in (overrides or {}).items():
        key = full_key.rsplit(".", 1)[-1]
        key = _ALIASES.get(key, key)
        if key not in _KEY_SECTION:
            raise ConfigError(f"unknown override {full_key}")
        if "." in full_key:
            section = full_key.rsplit(".", 1)[0]
            if _KEY_SECTION[key] != section:
                raise ConfigError(f"override {full_key}: {key} belongs to "
                                  f"[{_KEY_SECTION[key]}]")
        value = _parse_scalar(raw) if isinstance(raw, str) else raw
        values[key] = _coerce(key, value, "override")

    missing = [k for k in _REQUIRED if k not in values]
    if missing:
        raise ConfigError(f"missing required keys: {', '.join(missing)}")
    config = replace(Config(s=values.pop("s")), **values)
    validate_config(config)
    return config


def validate_config(config: Config) -> None:
    """Range and consistency checks; raises ConfigError naming the field."""
    c = config
    if not (isinstance(c.s, float) and 0.0 < c.s < 1.0):
        raise ConfigError(f"s must lie in (0, 1), got {c.s}")
    if not (c.dx > 0.0 and math.isfinite(c.dx)):
        raise ConfigError(f"dx must be > 0, got {c.dx}")
    if not (c.domain_radius > 0.0 and math.isfinite(c.domain_radius)):
        raise ConfigError(f"domain_radius must be > 0, got {c.domain_radius}")
    if c.domain_radius < c.dx:
        raise ConfigError("domain_radius must be at least dx")
    if not (c.L >= 0.0 and math.isfinite(c.L)):
        raise ConfigError(f"L must be >= 0, got {c.L}")
    for key in ("P1", "P2", "box_height", "box_radius"):
        if not getattr(c, key) > 0.0:
            raise ConfigError(f"{key} must be > 0, got {getattr(c, key)}")
    if c.law == "two" and not (c.k1 > 0.0 and c.k2 > 0.0):
        raise ConfigError("k1 and k2 must be > 0 for the two-phase law")
    if not (math.isfinite(c.t_final) and c.t_final >= 0.0):
        raise ConfigError(f"t_final must be finite and >= 0, got {c.t_final}")
    if not (0.0 < c.theta <= 1.0):
        raise ConfigError(f"theta must lie in (0, 1], got {c.theta}")
    snaps = list(c.snapshots)
    if snaps != sorted(snaps):
        raise ConfigError("snapshots must be sorted ascending")
    if any(t < 0.0 or t > c.t_final + 1e-12 for t in snaps):
        raise ConfigError("snapshots must lie in [0, t_final]")
    if c.window_G is not None and c.window_G < 1:
        raise ConfigError(f"window_G must be >= 1 or null, got {c.window_G}")
    # CFL feasibility before any compute: the step is dt ~ theta*dx^(2s)
    lip = max(c.k1, c.k2) if c.law == "two" else 1.0
    weight_sum = 2.0 * power_tail(c.s, 1) * c.dx ** (-2.0 * c.s)
    steps = c.t_final * lip * weight_sum / c.theta
    if steps > 5e7:
        raise ConfigError(
            f"t_final/dx combination needs about {steps:.2g} CFL steps; "
            "refusing (> 5e7)")


def render_config(config: Config) -> str:
    """Canonical text form; parse_config(text=...) inverts it exactly."""
    out = io.StringIO()
    for section, keys in SECTION_LAYOUT.items():
        out.write(f"[{section}]\n")
        for key in keys:
            out.write(f"{key} = {json.dumps(getattr(config, key))}\n")
        out.write("\n")
    return out.getvalue()
