"""Divergence-form conservation laws, Clebsch potentials, and the
electro-/magnetodynamic transport scenarios."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable

import numpy as np

from . import _numdiff
from .errors import ArgumentError
from .kinematics import FlowMap, MassField, deformation_gradient, mass_density, spacetime_divergence, velocity_gradient
from .lie import lie_derivative, material_derivative
from .report import CheckReport, Sample
from .tensors import EulerianField, Variance

__all__ = [
    "ClebschData",
    "clebsch_data",
    "ChargeField",
    "divergence_law_residual",
    "clebsch_verify",
    "charge_density",
    "charge_conservation_residual",
    "electric_pullback",
    "reference_variation",
    "InductionResult",
    "induction_residual",
    "induction_curl_residual",
]


def divergence_law_residual(beta: EulerianField, mass: MassField, flow: FlowMap, t, x) -> float:
    """``∂(ρβ)/∂t + div(ρβu)``; equals ``ρ dβ/dt``, so it vanishes iff ``β``
    moves with the fluid."""
    if beta.variance is not Variance.SCALAR:
        raise ArgumentError("divergence_law_residual needs a scalar field")
    return spacetime_divergence(lambda s, y: mass_density(mass, s, y) * float(beta.data(s, y)), flow, t, x)


@dataclass(frozen=True)
class ClebschData:
    """``ρJ = f(s, η) grad s × grad η`` assembled from the potentials."""

    f: Callable[[float, float], float]
    s: EulerianField
    eta: EulerianField
    rhoJ: EulerianField


def clebsch_data(f, s: EulerianField, eta: EulerianField, h=_numdiff.H_SPACE) -> ClebschData:
    for fld in (s, eta):
        if fld.variance is not Variance.SCALAR:
            raise ArgumentError("Clebsch potentials must be scalar fields")

    def rhoJ(t, x):
        gs = _numdiff.gradient(lambda y: s.data(t, y), x, h)
        ge = _numdiff.gradient(lambda y: eta.data(t, y), x, h)
        return f(float(s.data(t, x)), float(eta.data(t, x))) * np.cross(gs, ge)

    return ClebschData(f, s, eta, EulerianField(Variance.VECTOR, rhoJ, "derived", "rhoJ"))


CLEBSCH_CHECKS = ("div_rhoJ", "grad_s_dot_J", "ds_dt", "deta_dt", "lie_J")


def clebsch_verify(
    data: ClebschData, mass: MassField, flow: FlowMap, samples: Iterable, tol: float = 1e-4
) -> CheckReport:
    """Constructive check of the Clebsch representation at ``samples``.

    Residual components per sample, in order: ``div(ρJ)``, ``(grad s)·J``,
    ``ds/dt``, ``dη/dt``, ``|d_L J|`` with ``J = ρJ/ρ``.  ``details`` holds
    the maximum of each and the names of the failing ones.
    """

    def rho(t, x):
        r = mass_density(mass, t, x)
        if not r > 0:
            raise ArgumentError(f"non-positive density {r!r} at t={t}, x={list(x)}")
        return r

    J = EulerianField(Variance.VECTOR, lambda t, x: data.rhoJ.data(t, x) / rho(t, x), "derived", "J")
    out = []
    for t, x in samples:
        x = np.asarray(x, dtype=float)
        rho(t, x)
        res = (
            _numdiff.divergence(lambda y: data.rhoJ.data(t, y), x),
            float(_numdiff.gradient(lambda y: data.s.data(t, y), x) @ J.data(t, x)),
            material_derivative(data.s, flow, t, x),
            material_derivative(data.eta, flow, t, x),
            lie_derivative(J, flow, t, x).norm,
        )
        out.append(Sample(float(t), tuple(x.tolist()), tuple(float(r) for r in res), "clebsch"))
    maxima = {name: max((abs(s.residual[k]) for s in out), default=0.0) for k, name in enumerate(CLEBSCH_CHECKS)}
    return CheckReport(
        name="clebsch",
        theorem="Clebsch",
        samples=out,
        tolerance=tol,
        details={"max_by_check": maxima, "failed": [k for k, v in maxima.items() if v > tol]},
    )


@dataclass(frozen=True)
class ChargeField:
    q0: Callable[[np.ndarray], float]
    flow: FlowMap


def charge_density(charge: ChargeField, t, x) -> float:
    """``q = q0(X) / det F``."""
    return mass_density(MassField(charge.q0, charge.flow), t, x)


def charge_conservation_residual(charge: ChargeField, t, x) -> float:
    """``∂q/∂t + div(q u)`` on the constructed charge density."""
    return spacetime_divergence(lambda s, y: charge_density(charge, s, y), charge.flow, t, x)


def electric_pullback(D_field: EulerianField, flow: FlowMap, t, x) -> np.ndarray:
    """Reference image ``D0 = det F · F^-1 D`` at ``X = inverse(t, x)``."""
    if D_field.variance not in (Variance.VECTOR, Variance.TWO_FORM):
        raise ArgumentError("electric displacement must be a vector/two_form field")
    X = flow.inverse(t, np.asarray(x, dtype=float))
    D = deformation_gradient(flow, t, X)
    return D.det_F * (D.F_inv @ D_field.data(t, x))


def reference_variation(D_field: EulerianField, flow: FlowMap, X, times) -> float:
    """``max_t |D0(t, X) - D0(t_0, X)|`` following the particle ``X``; zero
    when ``D`` is a transported 2-form."""
    X = np.asarray(X, dtype=float)
    refs = [electric_pullback(D_field, flow, t, flow.forward(t, X)) for t in times]
    return max(float(np.linalg.norm(r - refs[0])) for r in refs)


@dataclass(frozen=True)
class InductionResult:
    residual: np.ndarray
    div_H: float


def induction_residual(H: EulerianField, flow: FlowMap, t, x, h=_numdiff.H_SPACE, dt=_numdiff.H_TIME) -> InductionResult:
    """``dH/dt + H div u - (∂u/∂x) H`` and ``div H``.

    Assembled directly from stencils rather than through
    :func:`lie_derivative`, so the two can be cross-checked.
    """
    if H.variance not in (Variance.VECTOR, Variance.TWO_FORM):
        raise ArgumentError("magnetic field must be a vector/two_form field")
    x = np.asarray(x, dtype=float)
    u = np.asarray(flow.velocity(t, x), dtype=float)
    Hx = H.data(t, x)
    dH_dt = _numdiff.time_derivative(lambda s: H.data(s, x), t, dt)
    gradH = _numdiff.jacobian(lambda y: H.data(t, y), x, h)
    L = velocity_gradient(flow, t, x, h)
    residual = dH_dt + gradH @ u + Hx * np.trace(L) - L @ Hx
    return InductionResult(residual, float(np.trace(gradH)))


def induction_curl_residual(H: EulerianField, flow: FlowMap, t, x, h=_numdiff.H_SPACE, dt=_numdiff.H_TIME) -> np.ndarray:
    """Conservative form ``∂H/∂t - curl(u × H)``; matches
    :func:`induction_residual` when ``div H = 0``."""
    x = np.asarray(x, dtype=float)
    dH_dt = _numdiff.time_derivative(lambda s: H.data(s, x), t, dt)
    c = _numdiff.curl(lambda y: np.cross(flow.velocity(t, y), H.data(t, y)), x, h)
    return dH_dt - c
