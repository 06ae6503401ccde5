"""Scenario configuration files (YAML) for the command-line runner.

Angles are given in degrees in the file and on the command line; the
library works in radians.  A grid may be written either as an explicit
list or as a mapping ``{start, stop, num}`` (inclusive linspace).
"""
from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path

import numpy as np
import yaml

from .averaging import QuadratureSpec
from .correlations import ChshSettings

SCENARIOS = ("sphere_sweep", "cone_sweep", "boosted_cone_sweep", "optimize", "compensate")
MODES = ("literal", "correlator")

_R = 1.0 / np.sqrt(2.0)


class ConfigError(ValueError):
    """Invalid or inconsistent scenario configuration."""


def _linspace(start, stop, num):
    return tuple(float(x) for x in np.linspace(start, stop, int(num)))


@dataclass(frozen=True)
class ScenarioConfig:
    scenario: str
    a1: tuple = (1.0, 0.0, 0.0)
    a2: tuple = (0.0, 1.0, 0.0)
    b1: tuple = (_R, _R, 0.0)
    b2: tuple = (_R, -_R, 0.0)
    speed_b: float = 0.99
    speeds: tuple = (0.5, 0.9, 0.99, 0.9999)
    beta: float = 0.0
    betas: tuple = (0.0, 0.7, 0.9, 0.99)
    grid_theta: tuple = _linspace(0, 180, 181)
    grid_phi: tuple = _linspace(0, 360, 361)
    theta_primes: tuple = _linspace(0, 180, 181)
    quadrature: tuple | None = None
    mode: str = "literal"
    # optimize
    directions: tuple = ((90.0, 0.0),)
    cone_theta_prime: float | None = None
    seed: int = 0
    tol: float = 1e-10
    max_iter: int = 20
    # compensate
    v_com: tuple = (0.0, 0.0, 0.0)
    targets: tuple = ((_R, _R, 0.0), (_R, -_R, 0.0))
    output_path: str | None = None

    def __post_init__(self):
        self.validate()

    # --- validation -------------------------------------------------------
    def validate(self):
        if self.scenario not in SCENARIOS:
            raise ConfigError(f"unknown scenario {self.scenario!r}; expected one of {SCENARIOS}")
        if self.mode not in MODES:
            raise ConfigError(f"mode must be one of {MODES}, got {self.mode!r}")
        for name in ("a1", "a2", "b1", "b2"):
            _check_vector(name, getattr(self, name))
        if not 0.0 < self.speed_b < 1.0:
            raise ConfigError("speed_b must lie in (0, 1)")
        if not 0.0 <= self.beta < 1.0:
            raise ConfigError("beta must lie in [0, 1)")
        _check_grid("speeds", self.speeds, 0.0, 1.0, open_lo=True, open_hi=True)
        _check_grid("betas", self.betas, 0.0, 1.0, open_hi=True)
        _check_grid("grid_theta", self.grid_theta, 0.0, 180.0)
        _check_grid("grid_phi", self.grid_phi, -np.inf, np.inf)
        _check_grid("theta_primes", self.theta_primes, 0.0, 180.0)
        if self.quadrature is not None:
            if len(self.quadrature) != 2:
                raise ConfigError("quadrature must be [n_theta, n_phi]")
            try:
                QuadratureSpec(*self.quadrature)
            except ValueError as exc:
                raise ConfigError(f"quadrature: {exc}") from None
        for d in self.directions:
            if len(d) != 2 or not 0.0 <= d[0] <= 180.0:
                raise ConfigError("directions must be [theta_deg, phi_deg] pairs with theta in [0, 180]")
        if self.cone_theta_prime is not None and not 0.0 < self.cone_theta_prime <= 180.0:
            raise ConfigError("cone_theta_prime must lie in (0, 180]")
        if self.tol <= 0 or self.max_iter < 1:
            raise ConfigError("tol must be positive and max_iter >= 1")
        if len(self.v_com) != 3 or float(np.dot(self.v_com, self.v_com)) >= 1.0:
            raise ConfigError("v_com must be a 3-vector with modulus < 1")
        if not self.targets:
            raise ConfigError("targets must not be empty")
        for t in self.targets:
            _check_vector("target", t)

    # --- derived objects --------------------------------------------------
    @property
    def settings(self) -> ChshSettings:
        return ChshSettings(*(_unit(getattr(self, k)) for k in ("a1", "a2", "b1", "b2")))

    @property
    def quad(self) -> QuadratureSpec | None:
        return None if self.quadrature is None else QuadratureSpec(*self.quadrature)

    # --- (de)serialization -----------------------------------------------
    def to_dict(self) -> dict:
        out = {}
        for k, v in asdict(self).items():
            out[k] = _plain(v)
        return out

    def dumps(self) -> str:
        return yaml.safe_dump(self.to_dict(), sort_keys=False)

    def digest(self) -> str:
        """SHA-256 of the configuration, ignoring where the output goes."""
        d = self.to_dict()
        d.pop("output_path")
        blob = json.dumps(d, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()

    @classmethod
    def from_dict(cls, data: dict) -> "ScenarioConfig":
        data = dict(data)
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown configuration keys: {sorted(unknown)}")
        if "scenario" not in data:
            raise ConfigError("configuration must name a scenario")
        data["scenario"] = str(data["scenario"]).replace("-", "_")
        kwargs = {}
        for k, v in data.items():
            try:
                kwargs[k] = _coerce(k, v)
            except (TypeError, ValueError, KeyError) as exc:
                raise ConfigError(f"{k}: {exc}") from None
        return cls(**kwargs)

    @classmethod
    def loads(cls, text: str) -> "ScenarioConfig":
        try:
            data = yaml.safe_load(text)
        except yaml.YAMLError as exc:
            raise ConfigError(f"malformed configuration: {exc}") from None
        if not isinstance(data, dict):
            raise ConfigError("configuration must be a mapping")
        return cls.from_dict(data)

    @classmethod
    def load(cls, path) -> "ScenarioConfig":
        return cls.loads(Path(path).read_text(encoding="utf-8"))

    def with_overrides(self, **kw) -> "ScenarioConfig":
        kw = {k: v for k, v in kw.items() if v is not None}
        return replace(self, **kw) if kw else self


_VECTOR_KEYS = {"a1", "a2", "b1", "b2", "v_com"}
_GRID_KEYS = {"speeds", "betas", "grid_theta", "grid_phi", "theta_primes"}
_FLOAT_KEYS = {"speed_b", "beta", "tol"}
_INT_KEYS = {"seed", "max_iter"}


def _coerce(key, value):
    if key in _VECTOR_KEYS:
        return tuple(float(x) for x in value)
    if key in _GRID_KEYS:
        if isinstance(value, dict):
            return _linspace(value["start"], value["stop"], value["num"])
        if np.isscalar(value):
            value = [value]
        return tuple(float(x) for x in value)
    if key in _FLOAT_KEYS:
        return float(value)
    if key in _INT_KEYS:
        return int(value)
    if key == "quadrature":
        if value is None or value == "auto":
            return None
        if isinstance(value, dict):
            value = (value["n_theta"], value["n_phi"])
        return tuple(int(x) for x in value)
    if key == "cone_theta_prime":
        return None if value is None else float(value)
    if key in ("directions", "targets"):
        return tuple(tuple(float(x) for x in row) for row in value)
    if key == "output_path":
        return None if value is None else str(value)
    return value


def _unit(v):
    v = np.asarray(v, dtype=float)
    return v / np.linalg.norm(v)


def _plain(v):
    if isinstance(v, tuple):
        return [_plain(x) for x in v]
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    return v


def _check_vector(name, v):
    if len(v) != 3 or not np.all(np.isfinite(v)):
        raise ConfigError(f"{name} must be a finite 3-vector")
    if abs(np.linalg.norm(v) - 1.0) > 1e-6:
        raise ConfigError(f"{name} must have unit norm (within 1e-6)")


def _check_grid(name, grid, lo, hi, open_lo=False, open_hi=False):
    g = np.asarray(grid, dtype=float)
    if g.ndim != 1 or g.size == 0:
        raise ConfigError(f"{name} must be a non-empty list")
    if not np.all(np.isfinite(g)):
        raise ConfigError(f"{name} must be finite")
    if np.any(np.diff(g) <= 0):
        raise ConfigError(f"{name} must be strictly increasing")
    if (g[0] <= lo if open_lo else g[0] < lo) or (g[-1] >= hi if open_hi else g[-1] > hi):
        raise ConfigError(f"{name} out of range")
