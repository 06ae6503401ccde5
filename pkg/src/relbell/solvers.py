"""Choosing apparatus fields for particle b.

``optimize_directions`` searches the two particle-b field directions that
maximize the CHSH quantity for a given velocity (or acceptance cone).
``solve_compensating_field`` inverts the lab-to-rest-frame field map so a
chosen rest-frame quantization axis is obtained exactly.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .averaging import AcceptanceCone, QuadratureSpec, cap_nodes
from .correlations import (
    REST_FRAME,
    FrameConfig,
    _unit,
    direction,
    normalize,
)
from .kinematics import (
    ORTHOGONALITY_TOL,
    NotOrthogonalError,
    as_vec3,
    rest_frame_field_composed,
)

MAX_CONDITION = 1e12


class DegenerateConfigurationError(ArithmeticError):
    """The lab-to-rest-frame field map cannot be inverted reliably."""


@dataclass(frozen=True)
class OptimizationResult:
    best_b1: np.ndarray
    best_b2: np.ndarray
    best_s: float
    iterations: int
    converged: bool


def field_map(v_com, frame: FrameConfig = REST_FRAME) -> np.ndarray:
    """3x3 matrix taking a lab magnetic field to the rest-frame field of a
    particle moving at ``v_com`` in the center-of-mass frame.

    Columns are the images of the lab basis vectors under the two-step
    boost, so the map is valid for fields of any orientation.
    """
    v_com = as_vec3(v_com)
    return np.column_stack([rest_frame_field_composed(e, v_com, frame.beta)
                            for e in np.eye(3)])


def solve_compensating_field(target_axis, v_com, frame: FrameConfig = REST_FRAME) -> np.ndarray:
    """Lab field direction whose rest-frame image points along ``target_axis``.

    The target must be perpendicular to the frame boost, like every
    apparatus field in the boosted scenarios.  The returned field itself is
    in general *not* perpendicular to the boost; use
    ``quantization_axis(..., general=True)`` to check it.
    """
    target = _unit(target_axis, 1e-9, "target_axis")
    beta = frame.beta
    if abs(target @ beta) > ORTHOGONALITY_TOL:
        raise NotOrthogonalError("target axis not orthogonal to boost")
    m = field_map(v_com, frame)
    if np.linalg.cond(m) > MAX_CONDITION:
        raise DegenerateConfigurationError("degenerate configuration: field map is singular")
    return normalize(np.linalg.solve(m, target))


def _angles_to_dirs(x):
    return direction(x[0], x[1]), direction(x[2], x[3])


class _PointObjective:
    """CHSH value at one velocity as a function of the b-field angles."""

    def __init__(self, a1, a2, v_com, frame):
        m = field_map(v_com, frame)
        # rows of a_i^T M, so a_i . (M b) is a plain dot product with b
        self.p1 = (a1 @ m).tolist()
        self.p2 = (a2 @ m).tolist()
        self.m = m.tolist()

    def _terms(self, theta, phi):
        st = math.sin(theta)
        b = (st * math.cos(phi), st * math.sin(phi), math.cos(theta))
        norm = math.sqrt(sum((r[0] * b[0] + r[1] * b[1] + r[2] * b[2]) ** 2 for r in self.m))
        p1, p2 = self.p1, self.p2
        return ((p1[0] * b[0] + p1[1] * b[1] + p1[2] * b[2]) / norm,
                (p2[0] * b[0] + p2[1] * b[1] + p2[2] * b[2]) / norm)

    def __call__(self, x) -> float:
        u1, u2 = self._terms(x[0], x[1])
        w1, w2 = self._terms(x[2], x[3])
        return abs(u1 + w1 + u2 - w2)


class _ConeObjective:
    """Cone-averaged CHSH value as a function of the b-field angles."""

    def __init__(self, a1, a2, speed, frame, cone, quad, mode="literal"):
        if mode not in ("literal", "correlator"):
            raise ValueError("mode must be 'literal' or 'correlator'")
        self.literal = mode == "literal"
        theta, phi, weights = cap_nodes(cone, quad)
        v = speed * direction(theta, phi)
        self.a1, self.a2 = a1, a2
        # one field map per quadrature node, shape (n_theta, n_phi, 3, 3)
        self.maps = np.stack([rest_frame_field_composed(e, v, frame.beta) for e in np.eye(3)],
                             axis=-1)
        self.weights = weights

    def __call__(self, x) -> float:
        b1, b2 = _angles_to_dirs(x)
        n1 = self.maps @ b1
        n2 = self.maps @ b2
        n1 /= np.linalg.norm(n1, axis=-1, keepdims=True)
        n2 /= np.linalg.norm(n2, axis=-1, keepdims=True)
        c = -(n1 @ self.a1) - (n2 @ self.a1) - (n1 @ self.a2) + (n2 @ self.a2)
        if self.literal:
            c = np.abs(c)
        return abs(float(np.sum(np.sum(c * self.weights, axis=1))))


def optimize_directions(a1, a2, v_com, frame: FrameConfig = REST_FRAME,
                        cone: AcceptanceCone | None = None,
                        quad: QuadratureSpec | None = None,
                        tol: float = 1e-10, max_iter: int = 20,
                        n_starts: int = 8, seed: int = 0,
                        mode: str = "literal") -> OptimizationResult:
    """Maximize the CHSH quantity over the two particle-b field directions.

    Without ``cone`` the objective is the CHSH value at velocity ``v_com``.
    With ``cone`` the particle moves with speed ``|v_com|`` in every
    direction of the cone and the cone average is maximized; ``mode``
    chooses between averaging the CHSH value (``"literal"``) and averaging
    the correlators first (``"correlator"``).

    The search runs rounds of ``n_starts`` Nelder-Mead descents from seeded
    random angles.  It stops as converged once a whole round improves the
    best value by less than ``tol``; ``max_iter`` caps the number of rounds.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    a1 = _unit(a1, name="a1")
    a2 = _unit(a2, name="a2")
    v_com = as_vec3(v_com)
    if v_com.shape != (3,):
        raise ValueError("v_com must be a single 3-vector")
    if cone is None:
        objective = _PointObjective(a1, a2, v_com, frame)
    else:
        speed = float(np.linalg.norm(v_com))
        if quad is None:
            quad = QuadratureSpec.for_speed(speed)
        objective = _ConeObjective(a1, a2, speed, frame, cone, quad, mode)

    rng = np.random.default_rng(seed)
    best_s, best_x = -np.inf, None
    iterations = 0
    converged = False
    for _ in range(max_iter):
        round_best = best_s
        for _ in range(n_starts):
            x0 = rng.uniform(0.0, 2.0 * np.pi, size=4)
            res = minimize(lambda x: -objective(x), x0, method="Nelder-Mead",
                           options={"xatol": 1e-9, "fatol": 1e-13,
                                    "maxiter": 4000, "maxfev": 8000})
            iterations += int(res.nit)
            s = -float(res.fun)
            # strict comparison keeps the earliest start on ties
            if s > round_best:
                round_best, best_x = s, res.x
        improvement = round_best - best_s
        best_s = round_best
        if improvement < tol:
            converged = True
            break
    b1, b2 = _angles_to_dirs(best_x)
    return OptimizationResult(best_b1=b1, best_b2=b2, best_s=best_s,
                              iterations=iterations, converged=converged)
