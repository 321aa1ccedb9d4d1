"""Variance-tagged tensor values and fields carried by a flow.

Storage conventions:

* vectors are columns, transported as ``F J0``;
* covectors are rows acting on the left, transported as ``C0 F^-1``;
* 2-forms are stored as their axial vector ``W`` (``w(a, b) = det(W, a, b)``),
  transported as ``F W0 / det F``;
* 3-forms are stored as the scalar density ``v`` of ``v det``, transported
  as ``v0 / det F``;
* matrices (mixed tensors) are transported by conjugation ``F M0 F^-1``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import _numdiff
from .errors import ArgumentError, EvaluationFailure
from .kinematics import DeformationState, FlowMap, MassField, deformation_gradient, mass_density

__all__ = [
    "Variance",
    "TensorFieldValue",
    "EulerianField",
    "push_forward",
    "pull_back",
    "push_data",
    "pull_data",
    "transported_field",
    "eulerian_field",
    "density_field",
    "derived_gradient",
    "derived_curl_over_rho",
    "derived_div_rho_J",
    "derived_wedge",
    "product_fields",
    "PRODUCT_KINDS",
]


class Variance(str, enum.Enum):
    SCALAR = "scalar"
    VECTOR = "vector"
    COVECTOR = "covector"
    TWO_FORM = "two_form"
    THREE_FORM = "three_form"
    MATRIX = "matrix"


SHAPES = {
    Variance.SCALAR: (),
    Variance.VECTOR: (3,),
    Variance.COVECTOR: (3,),
    Variance.TWO_FORM: (3,),
    Variance.THREE_FORM: (),
    Variance.MATRIX: (3, 3),
}


def _as_data(variance: Variance, data) -> np.ndarray:
    arr = np.array(data, dtype=float)
    if arr.shape != SHAPES[variance]:
        raise ArgumentError(f"{variance.value} data must have shape {SHAPES[variance]}, got {arr.shape}")
    return arr


@dataclass(frozen=True)
class TensorFieldValue:
    variance: Variance
    data: np.ndarray

    def __post_init__(self):
        variance = Variance(self.variance)
        arr = _as_data(variance, self.data)
        if not np.all(np.isfinite(arr)):
            raise ArgumentError(f"non-finite {variance.value} value {arr!r}")
        arr.setflags(write=False)
        object.__setattr__(self, "variance", variance)
        object.__setattr__(self, "data", arr)


def push_data(variance: Variance, data, F, F_inv, det_F) -> np.ndarray:
    """Reference-space data -> current-space data (array level)."""
    if variance is Variance.SCALAR:
        return np.asarray(data, dtype=float)
    if variance is Variance.VECTOR:
        return F @ data
    if variance is Variance.COVECTOR:
        return data @ F_inv
    if variance is Variance.TWO_FORM:
        return (F @ data) / det_F
    if variance is Variance.THREE_FORM:
        return np.asarray(data / det_F, dtype=float)
    return F @ data @ F_inv


def pull_data(variance: Variance, data, F, F_inv, det_F) -> np.ndarray:
    """Current-space data -> reference-space data; inverse of :func:`push_data`."""
    if variance is Variance.SCALAR:
        return np.asarray(data, dtype=float)
    if variance is Variance.VECTOR:
        return F_inv @ data
    if variance is Variance.COVECTOR:
        return data @ F
    if variance is Variance.TWO_FORM:
        return det_F * (F_inv @ data)
    if variance is Variance.THREE_FORM:
        return np.asarray(data * det_F, dtype=float)
    return F_inv @ data @ F


def push_forward(value0: TensorFieldValue, D: DeformationState) -> TensorFieldValue:
    v = Variance(value0.variance)
    return TensorFieldValue(v, push_data(v, _as_data(v, value0.data), D.F, D.F_inv, D.det_F))


def pull_back(value: TensorFieldValue, D: DeformationState) -> TensorFieldValue:
    v = Variance(value.variance)
    return TensorFieldValue(v, pull_data(v, _as_data(v, value.data), D.F, D.F_inv, D.det_F))


@dataclass(frozen=True)
class EulerianField:
    """``(t, x) -> value`` of fixed variance.

    ``fn`` returns raw array data; calling the field wraps it in a
    :class:`TensorFieldValue`.  ``provenance`` is one of ``builtin``,
    ``expression``, ``transported`` or ``derived``.
    """

    variance: Variance
    fn: Callable[[float, np.ndarray], np.ndarray]
    provenance: str = "builtin"
    name: str = ""

    def data(self, t, x) -> np.ndarray:
        out = np.asarray(self.fn(t, np.asarray(x, dtype=float)), dtype=float)
        if out.shape != SHAPES[self.variance]:
            raise ArgumentError(
                f"field {self.name!r} returned shape {out.shape} for variance {self.variance.value}"
            )
        if not np.all(np.isfinite(out)):
            raise EvaluationFailure(f"value of field {self.name!r}", t, x)
        return out

    def __call__(self, t, x) -> TensorFieldValue:
        return TensorFieldValue(self.variance, self.data(t, x))


def eulerian_field(variance, fn, name="", provenance="builtin") -> EulerianField:
    return EulerianField(Variance(variance), fn, provenance, name)


def _raw(value, variance):
    if isinstance(value, TensorFieldValue):
        if value.variance is not variance:
            raise ArgumentError(f"expected {variance.value} value, got {value.variance.value}")
        return value.data
    return _as_data(variance, value)


def transported_field(flow: FlowMap, variance, field0, name: str = "", method: str = "auto") -> EulerianField:
    """Eulerian field moving with the fluid whose reference image is ``field0(X)``.

    ``v(t, x) = push_forward(field0(X), F(t, X))`` with ``X = inverse(t, x)``.
    """
    variance = Variance(variance)

    def fn(t, x):
        X = flow.inverse(t, x)
        D = deformation_gradient(flow, t, X, method=method)
        return push_data(variance, _raw(field0(X), variance), D.F, D.F_inv, D.det_F)

    return EulerianField(variance, fn, "transported", name or f"transported {variance.value}")


def density_field(mass: MassField, name: str = "rho") -> EulerianField:
    """Mass density as a 3-form density field."""
    return EulerianField(Variance.THREE_FORM, lambda t, x: mass_density(mass, t, x), "derived", name)


def _require(field: EulerianField, *variances):
    if field.variance not in variances:
        allowed = ", ".join(v.value for v in variances)
        raise ArgumentError(f"field {field.name!r} has variance {field.variance.value}; expected {allowed}")


def derived_gradient(s: EulerianField, h: float = _numdiff.H_SPACE) -> EulerianField:
    """Covector field ``ds/dx`` (central differences)."""
    _require(s, Variance.SCALAR)
    return EulerianField(
        Variance.COVECTOR, lambda t, x: _numdiff.gradient(lambda y: s.data(t, y), x, h), "derived", f"grad({s.name})"
    )


def _rho_of(mass):
    if isinstance(mass, MassField):
        return lambda t, x: mass_density(mass, t, x)
    _require(mass, Variance.THREE_FORM, Variance.SCALAR)
    return lambda t, x: float(mass.data(t, x))


def derived_curl_over_rho(C: EulerianField, mass, h: float = _numdiff.H_SPACE) -> EulerianField:
    """Vector field ``curl(C^T) / rho``."""
    _require(C, Variance.COVECTOR)
    rho = _rho_of(mass)

    def fn(t, x):
        return _numdiff.curl(lambda y: C.data(t, y), x, h) / rho(t, x)

    return EulerianField(Variance.VECTOR, fn, "derived", f"curl({C.name})/rho")


def derived_div_rho_J(J: EulerianField, mass, h: float = _numdiff.H_SPACE) -> EulerianField:
    """``div(rho J)``, tagged as a 3-form density: it transports as
    ``Div0(rho0 J0) / det F``."""
    _require(J, Variance.VECTOR)
    rho = _rho_of(mass)

    def fn(t, x):
        return _numdiff.divergence(lambda y: rho(t, y) * J.data(t, y), x, h)

    return EulerianField(Variance.THREE_FORM, fn, "derived", f"div(rho {J.name})")


def derived_wedge(alpha: EulerianField, beta: EulerianField, h: float = _numdiff.H_SPACE) -> EulerianField:
    """2-form ``d alpha ^ d beta`` as its axial vector ``grad alpha x grad beta``."""
    _require(alpha, Variance.SCALAR)
    _require(beta, Variance.SCALAR)

    def fn(t, x):
        ga = _numdiff.gradient(lambda y: alpha.data(t, y), x, h)
        gb = _numdiff.gradient(lambda y: beta.data(t, y), x, h)
        return np.cross(ga, gb)

    return EulerianField(Variance.TWO_FORM, fn, "derived", f"d{alpha.name}^d{beta.name}")


# kind -> (operand variances, result variance)
_S, _V, _C, _W, _R, _M = (
    Variance.SCALAR,
    Variance.VECTOR,
    Variance.COVECTOR,
    Variance.TWO_FORM,
    Variance.THREE_FORM,
    Variance.MATRIX,
)
PRODUCT_KINDS = {
    "C_dot_J": ((_C, _V), _S),
    "rho_C_J": ((_R, _C, _V), _R),
    "J_outer_C": ((_V, _C), _M),
    "det_J_outer_C": ((_V, _C), _S),
    "rho_W": ((_R, _W), _V),
    "rho_C_W": ((_R, _C, _W), _S),
    # W / rho and (C W) / rho: the combinations that stay transported when det F varies
    "W_over_rho": ((_R, _W), _V),
    "C_W_over_rho": ((_R, _C, _W), _S),
}


def _product(kind, vals):
    if kind == "C_dot_J":
        C, J = vals
        return C @ J
    if kind == "rho_C_J":
        r, C, J = vals
        return r * (C @ J)
    if kind == "J_outer_C":
        J, C = vals
        return np.outer(J, C)
    if kind == "det_J_outer_C":
        J, C = vals
        return np.linalg.det(np.outer(J, C))
    if kind == "rho_W":
        r, W = vals
        return r * W
    if kind == "rho_C_W":
        r, C, W = vals
        return r * (C @ W)
    if kind == "W_over_rho":
        r, W = vals
        return W / r
    r, C, W = vals
    return (C @ W) / r


def product_fields(kind: str, *operands) -> EulerianField:
    """Pointwise product of fields; see ``PRODUCT_KINDS`` for operand order.

    A :class:`MassField` is accepted wherever a density operand is expected.
    ``det_J_outer_C`` is identically zero for rank-one ``J C`` and is kept
    only for completeness.
    """
    try:
        signature, result = PRODUCT_KINDS[kind]
    except KeyError:
        raise ArgumentError(f"unknown product kind {kind!r}; known: {sorted(PRODUCT_KINDS)}") from None
    if len(operands) != len(signature):
        raise ArgumentError(f"{kind} takes {len(signature)} operands, got {len(operands)}")
    getters = []
    for op, want in zip(operands, signature):
        if want is Variance.THREE_FORM and isinstance(op, MassField):
            getters.append(_rho_of(op))
            continue
        if not isinstance(op, EulerianField) or op.variance is not want:
            got = op.variance.value if isinstance(op, EulerianField) else type(op).__name__
            raise ArgumentError(f"{kind}: operand expected {want.value}, got {got}")
        getters.append(op.data)

    def fn(t, x):
        return _product(kind, [g(t, x) for g in getters])

    return EulerianField(result, fn, "derived", kind)
