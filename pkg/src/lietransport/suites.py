"""Built-in witness fields.

``REFERENCE_FIELDS`` are reference images ``field0(X)`` (one per variance),
used to build fields that move with the fluid.  ``STATIC_WITNESSES`` are
explicitly time-dependent Eulerian fields that are not transported by any
catalog flow.  ``SCALAR_SUITE`` is a fixed set of smooth scalar fields.
"""

import math

import numpy as np

from .kinematics import FlowMap, MassField
from .tensors import EulerianField, Variance, transported_field

__all__ = [
    "REFERENCE_FIELDS",
    "STATIC_WITNESSES",
    "SCALAR_SUITE",
    "reference_density",
    "transported_suite",
    "witness_suite",
    "scalar_suite",
    "SUITES",
]


def reference_density(X):
    return 1.0 + 0.25 * X[0] ** 2 + 0.1 * math.sin(X[1])


def _scalar0(X):
    return X[0] + math.sin(X[1]) * X[2]


def _vector0(X):
    return np.array([X[1], math.sin(X[0]), 1.0 + X[2] ** 2])


def _covector0(X):
    return np.array([math.cos(X[1]), X[0] * X[2], 1.0])


def _two_form0(X):
    return np.array([X[2], 1.0, X[0] * X[1]])


def _three_form0(X):
    return 1.0 + X[0] ** 2 + 0.5 * math.sin(X[2])


def _matrix0(X):
    return np.array([[X[0], 1.0, 0.0], [X[1] * X[2], 2.0, X[0]], [0.0, math.cos(X[1]), 3.0]])


REFERENCE_FIELDS = {
    Variance.SCALAR: _scalar0,
    Variance.VECTOR: _vector0,
    Variance.COVECTOR: _covector0,
    Variance.TWO_FORM: _two_form0,
    Variance.THREE_FORM: _three_form0,
    Variance.MATRIX: _matrix0,
}

# same shapes, evaluated at the current point and scaled by (1 + t)
STATIC_WITNESSES = {v: (lambda f: (lambda t, x: (1.0 + t) * np.asarray(f(x))))(f) for v, f in REFERENCE_FIELDS.items()}

SCALAR_SUITE = {
    "x1x2": lambda t, x: x[0] * x[1],
    "trig": lambda t, x: math.sin(x[0]) * math.cos(x[1]) + t * x[2],
    "exp": lambda t, x: math.exp(0.3 * x[2]) * x[0],
    "saddle": lambda t, x: x[0] ** 2 - x[1] ** 2 + t,
    "wave": lambda t, x: math.cos(x[0] + 2.0 * x[1] - x[2]) * (1.0 + t),
}


def transported_suite(flow: FlowMap) -> dict:
    """One transported field per variance."""
    return {v: transported_field(flow, v, f0, name=f"transported {v.value}") for v, f0 in REFERENCE_FIELDS.items()}


def witness_suite() -> dict:
    """One non-transported, time-dependent field per variance."""
    return {v: EulerianField(v, fn, "builtin", f"witness {v.value}") for v, fn in STATIC_WITNESSES.items()}


def scalar_suite() -> dict:
    return {name: EulerianField(Variance.SCALAR, fn, "builtin", name) for name, fn in SCALAR_SUITE.items()}


def default_mass(flow: FlowMap) -> MassField:
    return MassField(reference_density, flow)


SUITES = {
    "transported": "one field per variance built from smooth reference images (moves with the fluid)",
    "witness": "one time-dependent Eulerian field per variance (not transported)",
    "scalars": "five smooth scalar fields: " + ", ".join(SCALAR_SUITE),
}
