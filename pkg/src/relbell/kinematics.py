"""Special-relativistic field transformations (units with c = 1).

Vectors are plain ``numpy`` arrays whose last axis has length 3, so every
function here broadcasts over stacks of velocities or fields.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

#: tolerance used for the field/boost orthogonality precondition
ORTHOGONALITY_TOL = 1e-9


class SuperluminalError(ValueError):
    """Raised for a velocity whose modulus is not below c = 1."""


class NotOrthogonalError(ValueError):
    """Raised when the lab field is not perpendicular to the frame boost."""


def as_vec3(x) -> np.ndarray:
    """Convert to a float array with a trailing axis of length 3."""
    arr = np.asarray(x, dtype=float)
    if arr.shape[-1:] != (3,):
        raise ValueError(f"expected trailing dimension 3, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("vector components must be finite")
    return arr


def _dot(a, b):
    return np.einsum("...i,...i->...", a, b)


def _check_velocity(v: np.ndarray) -> np.ndarray:
    v2 = _dot(v, v)
    if np.any(v2 >= 1.0):
        raise SuperluminalError("superluminal velocity: |v| must be < 1")
    return v2


def gamma(v) -> np.ndarray | float:
    """Lorentz factor 1/sqrt(1 - |v|^2) of a velocity vector."""
    v = as_vec3(v)
    g = 1.0 / np.sqrt(1.0 - _check_velocity(v))
    return float(g) if np.ndim(g) == 0 else g


def _boost_coefficients(v):
    v2 = _check_velocity(v)
    g = 1.0 / np.sqrt(1.0 - v2)
    # gamma^2/(gamma+1), written to stay finite at v = 0
    return g, g * g / (g + 1.0)


@dataclass(frozen=True)
class EmField:
    """Electric and magnetic field pair in one inertial frame."""

    e: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "e", as_vec3(self.e))
        object.__setattr__(self, "b", as_vec3(self.b))

    @classmethod
    def magnetic(cls, b) -> "EmField":
        b = as_vec3(b)
        return cls(np.zeros_like(b), b)

    def invariant(self):
        """The Lorentz scalar B^2 - E^2."""
        return _dot(self.b, self.b) - _dot(self.e, self.e)


def boost_field(f: EmField, v) -> EmField:
    """Fields seen in the frame moving with velocity ``v``."""
    v = as_vec3(v)
    g, k = _boost_coefficients(v)
    g_ = np.asarray(g)[..., None]
    k_ = np.asarray(k)[..., None]
    e, b = f.e, f.b
    b_out = g_ * (b - np.cross(v, e)) - k_ * v * _dot(v, b)[..., None]
    e_out = g_ * (e + np.cross(v, b)) - k_ * v * _dot(v, e)[..., None]
    return EmField(e_out, b_out)


def rest_frame_field(b_lab, v) -> np.ndarray:
    """Magnetic field in the rest frame of a particle moving at ``v`` through
    a purely magnetic lab field ``b_lab``.
    """
    b_lab = as_vec3(b_lab)
    v = as_vec3(v)
    g, k = _boost_coefficients(v)
    return (np.asarray(g)[..., None] * b_lab
            - (np.asarray(k) * _dot(v, b_lab))[..., None] * v)


def rest_frame_field_boosted(b_lab, v_com, beta, *, check_orthogonal=True) -> np.ndarray:
    """Rest-frame magnetic field of a particle moving at ``v_com`` in a
    center-of-mass frame that itself moves at ``beta`` through the lab.

    The closed form assumes ``b_lab`` perpendicular to ``beta``; pass
    ``check_orthogonal=False`` only to evaluate it as a linear map (the
    compensating-field solver does this to build its matrix).
    """
    b_lab = as_vec3(b_lab)
    v = as_vec3(v_com)
    beta = as_vec3(beta)
    g_b = np.asarray(gamma(beta))[..., None]
    g_v, k_v = _boost_coefficients(v)
    g_v = np.asarray(g_v)[..., None]
    k_v = np.asarray(k_v)[..., None]
    if check_orthogonal:
        scale = np.sqrt(_dot(b_lab, b_lab) * _dot(beta, beta))
        if np.any(np.abs(_dot(b_lab, beta)) > ORTHOGONALITY_TOL * np.maximum(scale, 1.0)):
            raise NotOrthogonalError("field not orthogonal to boost")
    bracket = b_lab - np.cross(v, np.cross(beta, b_lab))
    return g_v * g_b * bracket - g_b * k_v * v * _dot(v, b_lab)[..., None]


def rest_frame_field_composed(b_lab, v_com, beta) -> np.ndarray:
    """Same physical quantity as :func:`rest_frame_field_boosted`, computed
    by two successive general boosts; valid for any field orientation."""
    lab = EmField.magnetic(b_lab)
    return boost_field(boost_field(lab, beta), v_com).b
