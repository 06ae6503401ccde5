"""Measurement axes and CHSH correlations for a singlet pair in which only
particle b moves relativistically.

The spin of each particle is measured along the apparatus magnetic field as
seen in that particle's rest frame.  Particle a is heavy, so its axis is the
lab field direction; particle b's axis depends on its velocity.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .kinematics import (
    as_vec3,
    gamma,
    rest_frame_field_boosted,
    rest_frame_field_composed,
)

TSIRELSON = 2.0 * np.sqrt(2.0)

_UNIT_TOL = 1e-12
_CONTRACT_TOL = 1e-9


class UndefinedAxisError(ValueError):
    """Raised when a zero field leaves the quantization axis undefined."""


def _unit(v, tol=_UNIT_TOL, name="direction") -> np.ndarray:
    v = as_vec3(v)
    n = np.linalg.norm(v, axis=-1)
    if np.any(np.abs(n - 1.0) > tol):
        raise ValueError(f"{name} must have unit norm (got {n})")
    return v


def normalize(v) -> np.ndarray:
    v = as_vec3(v)
    n = np.linalg.norm(v, axis=-1, keepdims=True)
    if np.any(n == 0.0):
        raise UndefinedAxisError("undefined axis: zero magnetic field")
    return v / n


def direction(theta, phi) -> np.ndarray:
    """Unit vector for polar angle ``theta`` (from +z) and azimuth ``phi``."""
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    st = np.sin(theta)
    return np.stack(np.broadcast_arrays(st * np.cos(phi), st * np.sin(phi), np.cos(theta)), axis=-1)


@dataclass(frozen=True)
class MomentumShell:
    """Isotropic momentum shell of particle b.

    Only ``speed_b`` influences the spin statistics; ``mass_b`` is kept so
    the shell momentum can be reported.
    """

    speed_b: float
    mass_b: float = 1.0

    def __post_init__(self):
        if not 0.0 < self.speed_b < 1.0:
            raise ValueError("speed_b must lie in (0, 1)")
        if not (self.mass_b > 0.0 and np.isfinite(self.mass_b)):
            raise ValueError("mass_b must be positive and finite")

    @property
    def momentum(self) -> float:
        return self.mass_b * gamma([0.0, 0.0, self.speed_b]) * self.speed_b


@dataclass(frozen=True)
class ChshSettings:
    """Lab-frame apparatus field directions for the four CHSH settings."""

    a1: np.ndarray
    a2: np.ndarray
    b1: np.ndarray
    b2: np.ndarray

    def __post_init__(self):
        for name in ("a1", "a2", "b1", "b2"):
            object.__setattr__(self, name, _unit(getattr(self, name), name=name))

    @classmethod
    def standard(cls) -> "ChshSettings":
        r = 1.0 / np.sqrt(2.0)
        return cls(a1=[1.0, 0.0, 0.0], a2=[0.0, 1.0, 0.0],
                   b1=[r, r, 0.0], b2=[r, -r, 0.0])

    def __eq__(self, other):
        if not isinstance(other, ChshSettings):
            return NotImplemented
        return all(np.array_equal(getattr(self, k), getattr(other, k))
                   for k in ("a1", "a2", "b1", "b2"))

    __hash__ = None


@dataclass(frozen=True)
class FrameConfig:
    """Velocity of the center-of-mass frame relative to the observer."""

    beta: np.ndarray = field(default_factory=lambda: np.zeros(3))

    def __post_init__(self):
        beta = as_vec3(self.beta)
        if beta.shape != (3,):
            raise ValueError("beta must be a single 3-vector")
        if beta @ beta >= 1.0:
            raise ValueError("superluminal velocity: |beta| must be < 1")
        object.__setattr__(self, "beta", beta)

    @classmethod
    def along_z(cls, beta: float) -> "FrameConfig":
        return cls(np.array([0.0, 0.0, float(beta)]))

    @property
    def is_rest(self) -> bool:
        return not np.any(self.beta)

    def __eq__(self, other):
        if not isinstance(other, FrameConfig):
            return NotImplemented
        return np.array_equal(self.beta, other.beta)

    __hash__ = None


REST_FRAME = FrameConfig()


def quantization_axis(b_lab, v_com, frame: FrameConfig = REST_FRAME, *,
                      general: bool = False) -> np.ndarray:
    """Spin quantization axis of particle b: the normalized rest-frame field.

    By default the lab field must be perpendicular to ``frame.beta`` (the
    closed-form transform assumes it).  ``general=True`` composes the two
    boosts explicitly and accepts any field orientation.
    """
    if general:
        b0 = rest_frame_field_composed(b_lab, v_com, frame.beta)
    else:
        b0 = rest_frame_field_boosted(b_lab, v_com, frame.beta)
    return normalize(b0)


def particle_a_axis(b_lab, frame: FrameConfig = REST_FRAME) -> np.ndarray:
    """Quantization axis of the (non-relativistic) particle a.

    A field perpendicular to the frame boost keeps its direction, so the
    axis is simply the normalized lab field.
    """
    b_lab = as_vec3(b_lab)
    if not frame.is_rest:
        # validates orthogonality with the same rule as the boosted transform
        rest_frame_field_boosted(b_lab, np.zeros(3), frame.beta)
    return normalize(b_lab)


def singlet_expectation(n_a, n_b) -> np.ndarray | float:
    """Joint expectation of spin along ``n_a`` (particle a) and ``n_b``
    (particle b) for the singlet: ``-n_a . n_b``."""
    n_a = _unit(n_a, _CONTRACT_TOL, "n_a")
    n_b = _unit(n_b, _CONTRACT_TOL, "n_b")
    e = -np.einsum("...i,...i->...", n_a, n_b)
    return float(e) if np.ndim(e) == 0 else e


def correlators(settings: ChshSettings, v_b, frame: FrameConfig = REST_FRAME) -> np.ndarray:
    """The four correlators (E11, E12, E21, E22) for particle-b velocities
    ``v_b``; output shape is ``v_b.shape[:-1] + (4,)``."""
    v_b = as_vec3(v_b)
    a1 = particle_a_axis(settings.a1, frame)
    a2 = particle_a_axis(settings.a2, frame)
    nb1 = quantization_axis(settings.b1, v_b, frame)
    nb2 = quantization_axis(settings.b2, v_b, frame)
    # -n_a . n_b without re-validating norms on every grid point
    return -np.stack([nb1 @ a1, nb2 @ a1, nb1 @ a2, nb2 @ a2], axis=-1)


def chsh_combination(e) -> np.ndarray:
    """E11 + E12 + E21 - E22 along the last axis (before the absolute value)."""
    e = np.asarray(e)
    return e[..., 0] + e[..., 1] + e[..., 2] - e[..., 3]


def chsh_s_velocity(settings: ChshSettings, v_b, frame: FrameConfig = REST_FRAME):
    """CHSH quantity for explicit particle-b velocities (vectorized)."""
    s = np.abs(chsh_combination(correlators(settings, v_b, frame)))
    return float(s) if np.ndim(s) == 0 else s


def chsh_s(settings: ChshSettings, theta, phi, shell: MomentumShell,
           frame: FrameConfig = REST_FRAME):
    """CHSH quantity when particle b moves with the shell speed along the
    direction (theta, phi) of the center-of-mass frame.

    ``theta`` and ``phi`` may be arrays; they broadcast against each other.
    """
    theta = np.asarray(theta, dtype=float)
    if np.any((theta < 0.0) | (theta > np.pi)):
        raise ValueError("theta must lie in [0, pi]")
    v_b = shell.speed_b * direction(theta, phi)
    return chsh_s_velocity(settings, v_b, frame)
