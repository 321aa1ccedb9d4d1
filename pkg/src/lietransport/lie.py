"""Numerical Lie derivatives along the space-time velocity ``(1, u)``.

With ``L = du/dx`` and ``d/dt`` the material derivative (``d/dt = ∂/∂t + u·∇``
applied componentwise)::

    scalar      ds/dt
    vector      dJ/dt - L J
    covector    dC/dt + C L
    two_form    dW/dt + W tr(L) - L W
    three_form  dv/dt + v tr(L)
    matrix      dM/dt + M L - L M

A field moves with the fluid iff its Lie derivative vanishes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _numdiff
from .kinematics import FlowMap, MassField, deformation_gradient, mass_density, velocity_gradient
from .tensors import (
    EulerianField,
    TensorFieldValue,
    Variance,
    derived_gradient,
    pull_data,
    push_data,
)
from .errors import ArgumentError, EvaluationFailure

__all__ = [
    "LieResult",
    "material_derivative",
    "material_rate",
    "lie_derivative",
    "lie_field",
    "lagrangian_lie_derivative",
    "vorticity",
    "vorticity_field",
    "helmholtz_residual",
    "specific_vorticity_residual",
    "commutation_defect",
]


@dataclass(frozen=True)
class LieResult:
    """Lie derivative at one point and the terms it was assembled from.

    ``parts`` always has ``time`` (∂v/∂t) and ``convection`` ((∂v/∂x) u);
    depending on the variance also ``stretching`` (the ``L``-terms) and
    ``dilatation`` (the ``tr L`` term).  ``value`` is their sum.
    """

    variance: Variance
    value: TensorFieldValue
    parts: dict

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.value.data))


def material_rate(field: EulerianField, flow: FlowMap, t, x, h=_numdiff.H_SPACE, dt=_numdiff.H_TIME):
    """``(∂v/∂t, (∂v/∂x) u)`` for any field, componentwise."""
    x = np.asarray(x, dtype=float)
    try:
        d_t = _numdiff.time_derivative(lambda s: field.data(s, x), t, dt)
        grad = _numdiff.jacobian(lambda y: field.data(t, y), x, h)
    except EvaluationFailure as exc:
        raise EvaluationFailure(f"{exc.what} (stencil around x={x.tolist()})", exc.t, exc.x) from exc
    u = np.asarray(flow.velocity(t, x), dtype=float)
    return np.asarray(d_t), grad @ u


def material_derivative(s: EulerianField, flow: FlowMap, t, x, h=_numdiff.H_SPACE, dt=_numdiff.H_TIME) -> float:
    if s.variance is not Variance.SCALAR:
        raise ArgumentError(f"material_derivative needs a scalar field, got {s.variance.value}")
    d_t, conv = material_rate(s, flow, t, x, h, dt)
    return float(d_t + conv)


def lie_derivative(field: EulerianField, flow: FlowMap, t, x, h=_numdiff.H_SPACE, dt=_numdiff.H_TIME) -> LieResult:
    x = np.asarray(x, dtype=float)
    d_t, conv = material_rate(field, flow, t, x, h, dt)
    parts = {"time": d_t, "convection": conv}
    var = field.variance
    if var is not Variance.SCALAR:
        L = velocity_gradient(flow, t, x, h)
        v = field.data(t, x)
        if var is Variance.VECTOR:
            parts["stretching"] = -(L @ v)
        elif var is Variance.COVECTOR:
            parts["stretching"] = v @ L
        elif var is Variance.TWO_FORM:
            parts["dilatation"] = v * np.trace(L)
            parts["stretching"] = -(L @ v)
        elif var is Variance.THREE_FORM:
            parts["dilatation"] = v * np.trace(L)
        else:
            parts["stretching"] = v @ L - L @ v
    total = sum(parts.values())
    return LieResult(var, TensorFieldValue(var, total), parts)


def lie_field(field: EulerianField, flow: FlowMap) -> EulerianField:
    """The Lie derivative of ``field`` as a field of the same variance."""
    return EulerianField(
        field.variance,
        lambda t, x: lie_derivative(field, flow, t, x).value.data,
        "derived",
        f"d_L({field.name})",
    )


def lagrangian_lie_derivative(field: EulerianField, flow: FlowMap, t, x, dt=_numdiff.H_TIME) -> TensorFieldValue:
    """Lie derivative through the reference space: pull the field back to
    ``X = inverse(t, x)``, differentiate in time at fixed ``X``, push forward.

    Independent of :func:`lie_derivative` (no velocity, no spatial stencil).
    """
    X = flow.inverse(t, np.asarray(x, dtype=float))
    var = field.variance

    def pulled(s):
        D = deformation_gradient(flow, s, X)
        return pull_data(var, field.data(s, flow.forward(s, X)), D.F, D.F_inv, D.det_F)

    rate = _numdiff.time_derivative(pulled, t, dt)
    D = deformation_gradient(flow, t, X)
    return TensorFieldValue(var, push_data(var, rate, D.F, D.F_inv, D.det_F))


def vorticity(flow: FlowMap, t, x, h=_numdiff.H_SPACE) -> np.ndarray:
    """``curl u`` from the velocity gradient (closed form when available)."""
    return _numdiff.curl_from_jacobian(velocity_gradient(flow, t, x, h))


def vorticity_field(flow: FlowMap) -> EulerianField:
    """Vorticity as a 2-form (axial vector) field."""
    return EulerianField(Variance.TWO_FORM, lambda t, x: vorticity(flow, t, x), "derived", "vorticity")


def helmholtz_residual(flow: FlowMap, t, x) -> LieResult:
    """``∂ω/∂t + (∂ω/∂x) u + ω div u - L ω``; zero iff vorticity is frozen in."""
    return lie_derivative(vorticity_field(flow), flow, t, x)


def specific_vorticity_residual(flow: FlowMap, mass: MassField, t, x) -> np.ndarray:
    """``D(ω/ρ)/Dt - L (ω/ρ)``.

    Multiplied by ``ρ`` this equals :func:`helmholtz_residual` whenever ``ρ``
    obeys mass conservation.
    """
    w_over_rho = EulerianField(
        Variance.VECTOR,
        lambda s, y: vorticity(flow, s, y) / mass_density(mass, s, y),
        "derived",
        "vorticity/rho",
    )
    return lie_derivative(w_over_rho, flow, t, x).value.data


def commutation_defect(s: EulerianField, flow: FlowMap, t, x) -> np.ndarray:
    """``d_L(grad s) - grad(d_L s)`` as a covector; vanishes identically."""
    if s.variance is not Variance.SCALAR:
        raise ArgumentError("commutation_defect needs a scalar field")
    lhs = lie_derivative(derived_gradient(s), flow, t, x).value.data
    rate = EulerianField(Variance.SCALAR, lambda tt, y: material_derivative(s, flow, tt, y), "derived", "ds/dt")
    rhs = _numdiff.gradient(lambda y: rate.data(t, y), np.asarray(x, dtype=float))
    return lhs - rhs
