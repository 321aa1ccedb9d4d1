"""Flow maps, velocity gradients and the deformation gradient.

A flow map carries reference (Lagrangian) points ``X`` to current points
``x = forward(t, X)``.  Three independent routes to ``F = dx/dX`` are
provided: closed form, central finite differences of ``forward``, and RK4
integration of ``dF/dt = L F``, ``dF^-1/dt = -F^-1 L`` with ``L = du/dx``.

All points are 3-vectors; planar flows keep ``x3 = X3``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Mapping, Optional

import numpy as np

from . import _numdiff
from .errors import ArgumentError, ConfigError, DegenerateMapError, EvaluationFailure

__all__ = [
    "DET_FLOOR",
    "FlowMap",
    "DeformationState",
    "MassField",
    "CATALOG",
    "catalog_flow",
    "zero_flow",
    "rotation_flow",
    "shear_flow",
    "expansion_flow",
    "cascade_flow",
    "trajectory_flow",
    "velocity_gradient",
    "deformation_gradient",
    "evolve_deformation",
    "mass_density",
    "spacetime_divergence",
    "jacobi_residual",
]

DET_FLOOR = 1e-10

Vec = np.ndarray
PointFn = Callable[[float, Vec], Vec]


@dataclass(frozen=True)
class FlowMap:
    """Time-dependent diffeomorphism with its Eulerian velocity.

    ``analytic_F(t, X)`` and ``grad_velocity(t, x)`` are optional closed
    forms.  ``integrated`` marks flows whose forward/inverse maps are
    obtained by integrating the velocity (no closed form available).
    """

    name: str
    forward: PointFn
    inverse: PointFn
    velocity: PointFn
    params: Mapping[str, float] = field(default_factory=dict)
    steady: bool = False
    analytic_F: Optional[Callable[[float, Vec], np.ndarray]] = None
    grad_velocity: Optional[Callable[[float, Vec], np.ndarray]] = None
    integrated: bool = False
    n_steps: int = 0
    description: str = ""


@dataclass(frozen=True)
class DeformationState:
    F: np.ndarray
    F_inv: np.ndarray
    det_F: float
    t: float
    X: np.ndarray


@dataclass(frozen=True)
class MassField:
    """Reference mass distribution ``rho0(X) > 0`` carried by ``flow``."""

    rho0: Callable[[Vec], float]
    flow: FlowMap


def _point(x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.shape != (3,):
        raise ArgumentError(f"points are 3-vectors, got shape {x.shape}")
    return x


def _state(F, t, X, F_inv=None) -> DeformationState:
    F = np.asarray(F, dtype=float)
    det = float(np.linalg.det(F))
    if not math.isfinite(det) or det < DET_FLOOR:
        raise DegenerateMapError(det, t, X)
    if F_inv is None:
        F_inv = np.linalg.inv(F)
    return DeformationState(F=F, F_inv=np.asarray(F_inv, dtype=float), det_F=det, t=float(t), X=np.asarray(X, float))


# ---------------------------------------------------------------------------
# catalog

def _linear_flow(name, params, A, propagator, description):
    """Steady linear flow ``u = A x`` with closed-form propagator ``exp(tA)``."""
    A = np.asarray(A, dtype=float)

    def forward(t, X):
        return propagator(t) @ _point(X)

    def inverse(t, x):
        return propagator(-t) @ _point(x)

    def velocity(t, x):
        return A @ _point(x)

    return FlowMap(
        name=name,
        forward=forward,
        inverse=inverse,
        velocity=velocity,
        params=dict(params),
        steady=True,
        analytic_F=lambda t, X: propagator(t),
        grad_velocity=lambda t, x: A,
        description=description,
    )


def zero_flow() -> FlowMap:
    I = np.eye(3)
    return _linear_flow("zero", {}, np.zeros((3, 3)), lambda t: I, "fluid at rest, u = 0")


def rotation_flow(omega: float = 1.0) -> FlowMap:
    A = omega * np.array([[0.0, -1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 0.0]])

    def R(t):
        c, s = math.cos(omega * t), math.sin(omega * t)
        return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])

    return _linear_flow("rotation", {"omega": omega}, A, R, "rigid rotation about e3, u = omega e3 x x")


def shear_flow(gamma: float = 2.0) -> FlowMap:
    A = np.zeros((3, 3))
    A[0, 1] = gamma

    def P(t):
        M = np.eye(3)
        M[0, 1] = gamma * t
        return M

    return _linear_flow("shear", {"gamma": gamma}, A, P, "simple shear, u = (gamma x2, 0, 0)")


def expansion_flow(a: float = 0.5) -> FlowMap:
    return _linear_flow(
        "expansion", {"a": a}, a * np.eye(3), lambda t: math.exp(a * t) * np.eye(3), "isotropic expansion, u = a x"
    )


def cascade_flow() -> FlowMap:
    """``u = (x2, x3, 0)``: nilpotent gradient, constant vorticity (-1, 0, -1)
    that is *not* frozen in (Helmholtz residual (0, 1, 0))."""
    A = np.array([[0.0, 1.0, 0.0], [0.0, 0.0, 1.0], [0.0, 0.0, 0.0]])

    def P(t):
        return np.array([[1.0, t, 0.5 * t * t], [0.0, 1.0, t], [0.0, 0.0, 1.0]])

    return _linear_flow("cascade", {}, A, P, "steady u = (x2, x3, 0); vorticity not transported")


CATALOG = {
    "zero": (zero_flow, {}),
    "rotation": (rotation_flow, {"omega": 1.0}),
    "shear": (shear_flow, {"gamma": 2.0}),
    "expansion": (expansion_flow, {"a": 0.5}),
    "cascade": (cascade_flow, {}),
}


def catalog_flow(name: str, **params) -> FlowMap:
    try:
        factory, defaults = CATALOG[name]
    except KeyError:
        raise ConfigError(f"unknown flow {name!r}; catalog flows: {', '.join(CATALOG)}") from None
    unknown = set(params) - set(defaults)
    if unknown:
        raise ConfigError(f"flow {name!r} has no parameter(s) {sorted(unknown)}; accepts {sorted(defaults)}")
    return factory(**{**defaults, **params})


# ---------------------------------------------------------------------------
# RK4 machinery

def _rk4(rhs, y, t0, t1, n):
    h = (t1 - t0) / n
    t = t0
    for k in range(n):
        k1 = rhs(t, y)
        k2 = rhs(t + 0.5 * h, y + 0.5 * h * k1)
        k3 = rhs(t + 0.5 * h, y + 0.5 * h * k2)
        k4 = rhs(t + h, y + h * k3)
        y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        t = t0 + (k + 1) * h
    return y


def _tangent_rhs(flow):
    # state = [x (3), F (9), F_inv (9)]
    def rhs(t, y):
        x = y[:3]
        F = y[3:12].reshape(3, 3)
        Fi = y[12:].reshape(3, 3)
        L = velocity_gradient(flow, t, x)
        return np.concatenate([flow.velocity(t, x), (L @ F).ravel(), (-Fi @ L).ravel()])

    return rhs


def _integrate_tangent(flow, X, t0, t1, n):
    y0 = np.concatenate([_point(X), np.eye(3).ravel(), np.eye(3).ravel()])
    if n == 0 or t1 == t0:
        return y0
    return _rk4(_tangent_rhs(flow), y0, t0, t1, n)


def trajectory_flow(
    velocity: PointFn,
    name: str = "expression",
    params: Mapping[str, float] | None = None,
    grad_velocity=None,
    steady: bool = False,
    n_steps: int = 256,
) -> FlowMap:
    """Flow map obtained by integrating ``velocity`` with fixed-count RK4.

    The step count is fixed (step = t / n_steps), which keeps the discrete
    map a smooth function of ``t`` so time finite differences stay clean.
    """
    if n_steps < 1:
        raise ArgumentError("n_steps must be positive")

    def rhs(t, x):
        return np.asarray(velocity(t, x), dtype=float)

    def forward(t, X):
        X = _point(X)
        return X.copy() if t == 0 else _rk4(rhs, X, 0.0, float(t), n_steps)

    def inverse(t, x):
        x = _point(x)
        return x.copy() if t == 0 else _rk4(rhs, x, float(t), 0.0, n_steps)

    return FlowMap(
        name=name,
        forward=forward,
        inverse=inverse,
        velocity=lambda t, x: rhs(t, _point(x)),
        params=dict(params or {}),
        steady=steady,
        grad_velocity=grad_velocity,
        integrated=True,
        n_steps=n_steps,
        description="velocity integrated along trajectories (RK4)",
    )


# ---------------------------------------------------------------------------
# operations

def velocity_gradient(flow: FlowMap, t: float, x, h: float = _numdiff.H_SPACE) -> np.ndarray:
    """``L[i, j] = d u_i / d x_j`` at ``(t, x)``; closed form when the flow
    has one, otherwise central differences with step ``h``."""
    x = _point(x)
    if flow.grad_velocity is not None:
        L = np.asarray(flow.grad_velocity(t, x), dtype=float)
    else:
        L = _numdiff.jacobian(lambda y: flow.velocity(t, y), x, h)
    if not np.all(np.isfinite(L)):
        raise EvaluationFailure("velocity gradient", t, x)
    return L


def deformation_gradient(
    flow: FlowMap, t: float, X, method: str = "auto", h: float = _numdiff.H_SPACE
) -> DeformationState:
    """``F = d forward(t, X) / dX`` by the chosen route.

    ``method`` is ``"analytic"``, ``"finite_difference"``, ``"ode"`` (RK4
    along the trajectory) or ``"auto"`` (closed form if available, ODE for
    integrated flows, finite differences otherwise).
    """
    X = _point(X)
    if method == "auto":
        if flow.analytic_F is not None:
            method = "analytic"
        elif flow.integrated:
            method = "ode"
        else:
            method = "finite_difference"
    if method == "analytic":
        if flow.analytic_F is None:
            raise ArgumentError(f"flow {flow.name!r} has no closed-form deformation gradient")
        F = np.asarray(flow.analytic_F(t, X), dtype=float)
        return _state(F, t, X)
    if method == "finite_difference":
        F = _numdiff.jacobian(lambda Y: flow.forward(t, Y), X, h)
        return _state(F, t, X)
    if method == "ode":
        n = flow.n_steps if flow.integrated else max(1, math.ceil(abs(t) / 1e-3))
        y = _integrate_tangent(flow, X, 0.0, float(t), n if t != 0 else 0)
        return _state(y[3:12].reshape(3, 3), t, X, F_inv=y[12:].reshape(3, 3))
    raise ArgumentError(f"unknown deformation-gradient method {method!r}")


def evolve_deformation(flow: FlowMap, X, t_end: float, dt: float) -> DeformationState:
    """Integrate ``dF/dt = L F`` and ``dF^-1/dt = -F^-1 L`` from the identity
    with classical fixed-step RK4; the trajectory is advanced in the same
    state vector.  The step is ``t_end / ceil(t_end / dt)``."""
    if not dt > 0:
        raise ArgumentError(f"step dt must be positive, got {dt!r}")
    if not t_end > 0:
        raise ArgumentError(f"t_end must be positive, got {t_end!r}")
    n = max(1, math.ceil(t_end / dt - 1e-9))
    y = _integrate_tangent(flow, X, 0.0, float(t_end), n)
    return _state(y[3:12].reshape(3, 3), t_end, X, F_inv=y[12:].reshape(3, 3))


def mass_density(mass: MassField, t: float, x) -> float:
    """``rho(t, x) = rho0(X) / det F`` with ``X = inverse(t, x)``."""
    X = mass.flow.inverse(t, _point(x))
    D = deformation_gradient(mass.flow, t, X)
    return float(mass.rho0(X)) / D.det_F


def spacetime_divergence(a, flow: FlowMap, t: float, x, h: float = _numdiff.H_SPACE, dt: float = _numdiff.H_TIME):
    """``d a/dt + div(a u)`` for a scalar function ``a(t, x)``, all by
    central differences."""
    x = _point(x)
    da_dt = float(_numdiff.time_derivative(lambda s: a(s, x), t, dt))
    flux_div = _numdiff.divergence(lambda y: a(t, y) * np.asarray(flow.velocity(t, y)), x, h)
    return da_dt + flux_div


def jacobi_residual(flow: FlowMap, t: float, X, dt: float = _numdiff.H_TIME) -> float:
    """Relative mismatch between ``d(det F)/dt`` (finite differences at fixed
    X) and ``det F * tr(du/dx)``."""
    X = _point(X)
    rate = float(_numdiff.time_derivative(lambda s: deformation_gradient(flow, s, X).det_F, t, dt))
    D = deformation_gradient(flow, t, X)
    expected = D.det_F * float(np.trace(velocity_gradient(flow, t, flow.forward(t, X))))
    return abs(rate - expected) / max(abs(D.det_F), 1.0)
