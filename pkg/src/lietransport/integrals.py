"""Integrals over material curves, surfaces and volumes.

Domains are parametrised once in the reference space and carried by the
flow.  Image tangents are obtained by the chain rule, ``dx/ds = F dX/ds``, so
the quadrature error is that of the reference parametrisation alone:

* closed curves: periodic trapezoid rule (spectrally accurate on smooth data);
* surfaces and volumes: tensor-product midpoint rule on ``[0, 1]^k``.

Flux orientation follows the parametrisation order, ``∂x/∂s1 × ∂x/∂s2``.
Node contributions are summed with numpy's pairwise summation in a fixed
order, so results are reproducible bit for bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from . import _numdiff
from .errors import ArgumentError
from .kinematics import FlowMap, deformation_gradient
from .tensors import EulerianField, Variance

__all__ = [
    "MaterialCurve",
    "MaterialSurface",
    "MaterialVolume",
    "circle",
    "disk",
    "rectangle",
    "box",
    "circulation",
    "flux",
    "volume_integral",
    "invariance_drift",
    "integral_rate",
    "observed_order",
]

CLOSURE_TOL = 1e-12
_H_PARAM = 1e-6


def _param_partials(param, s, h=_H_PARAM):
    s = np.asarray(s, dtype=float)
    cols = []
    for k in range(s.size):
        e = np.zeros_like(s)
        e[k] = h
        cols.append((np.asarray(param(*(s + e))) - np.asarray(param(*(s - e)))) / (2 * h))
    return cols


@dataclass(frozen=True)
class MaterialCurve:
    """Curve ``s in [0, 1] -> X``; ``tangent`` defaults to central differences."""

    param: Callable[[float], np.ndarray]
    n_segments: int = 512
    tangent: Optional[Callable[[float], np.ndarray]] = None

    def __post_init__(self):
        if self.n_segments < 8:
            raise ArgumentError("a material curve needs at least 8 segments")

    @property
    def closure_gap(self) -> float:
        return float(np.linalg.norm(np.asarray(self.param(1.0)) - np.asarray(self.param(0.0))))

    @property
    def closed(self) -> bool:
        return self.closure_gap <= CLOSURE_TOL

    def d_param(self, s):
        if self.tangent is not None:
            return np.asarray(self.tangent(s), dtype=float)
        return _param_partials(self.param, [s])[0]


@dataclass(frozen=True)
class MaterialSurface:
    """Patch ``(s1, s2) in [0, 1]^2 -> X`` sampled at ``n1 x n2`` cell midpoints."""

    param: Callable[[float, float], np.ndarray]
    n1: int = 64
    n2: int = 64
    partials: Optional[Callable[[float, float], tuple]] = None

    def d_param(self, s1, s2):
        if self.partials is not None:
            return tuple(np.asarray(p, dtype=float) for p in self.partials(s1, s2))
        return tuple(_param_partials(self.param, [s1, s2]))

    def check_immersion(self) -> float:
        """Smallest ``|∂X/∂s1 × ∂X/∂s2|`` over the nodes; raises if zero."""
        smallest = min(float(np.linalg.norm(np.cross(*self.d_param(a, b)))) for a, b in _midpoints(self.n1, self.n2))
        if smallest == 0.0:
            raise ArgumentError("surface parametrisation is not an immersion at some node")
        return smallest


@dataclass(frozen=True)
class MaterialVolume:
    """Cell ``(s1, s2, s3) in [0, 1]^3 -> X`` sampled at ``n^3`` midpoints."""

    param: Callable[[float, float, float], np.ndarray]
    n: int = 32
    partials: Optional[Callable[[float, float, float], tuple]] = None

    def d_param(self, s1, s2, s3):
        if self.partials is not None:
            return tuple(np.asarray(p, dtype=float) for p in self.partials(s1, s2, s3))
        return tuple(_param_partials(self.param, [s1, s2, s3]))


def _midpoints(*ns):
    axes = [(np.arange(n) + 0.5) / n for n in ns]
    grids = np.meshgrid(*axes, indexing="ij")
    return np.stack([g.ravel() for g in grids], axis=-1)


# ---------------------------------------------------------------------------
# standard shapes

def circle(radius=1.0, center=(0.0, 0.0, 0.0), n_segments=512) -> MaterialCurve:
    """Circle in the plane ``X3 = center[2]``, counter-clockwise about e3."""
    c = np.asarray(center, dtype=float)
    tau = 2.0 * math.pi

    def param(s):
        return c + radius * np.array([math.cos(tau * s), math.sin(tau * s), 0.0])

    def tangent(s):
        return radius * tau * np.array([-math.sin(tau * s), math.cos(tau * s), 0.0])

    return MaterialCurve(param, n_segments, tangent)


def disk(radius=1.0, center=(0.0, 0.0, 0.0), n1=64, n2=64) -> MaterialSurface:
    """Disk in the plane ``X3 = center[2]`` in polar parametrisation
    (``s1`` radial, ``s2`` angular); normal orientation +e3."""
    c = np.asarray(center, dtype=float)
    tau = 2.0 * math.pi

    def param(s1, s2):
        r = radius * s1
        return c + np.array([r * math.cos(tau * s2), r * math.sin(tau * s2), 0.0])

    def partials(s1, s2):
        ca, sa = math.cos(tau * s2), math.sin(tau * s2)
        r = radius * s1
        return np.array([radius * ca, radius * sa, 0.0]), np.array([-r * tau * sa, r * tau * ca, 0.0])

    return MaterialSurface(param, n1, n2, partials)


def rectangle(origin, edge1, edge2, n1=64, n2=64) -> MaterialSurface:
    o, a, b = (np.asarray(v, dtype=float) for v in (origin, edge1, edge2))
    return MaterialSurface(lambda s1, s2: o + s1 * a + s2 * b, n1, n2, lambda s1, s2: (a, b))


def box(lo=(0.0, 0.0, 0.0), hi=(1.0, 1.0, 1.0), n=32) -> MaterialVolume:
    lo = np.asarray(lo, dtype=float)
    ext = np.asarray(hi, dtype=float) - lo
    if np.any(ext <= 0):
        raise ArgumentError("box needs hi > lo in every coordinate")
    cols = tuple(np.diag(ext))
    return MaterialVolume(lambda s1, s2, s3: lo + ext * np.array([s1, s2, s3]), n, lambda s1, s2, s3: cols)


# ---------------------------------------------------------------------------
# integrals

def _F(flow, t, X, method):
    return deformation_gradient(flow, t, X, method=method).F


def circulation(C: EulerianField, flow: FlowMap, curve: MaterialCurve, t: float, method: str = "auto") -> float:
    """``∮ C dx`` over the image of a closed material curve at time ``t``."""
    if C.variance is not Variance.COVECTOR:
        raise ArgumentError(f"circulation integrates a covector field, got {C.variance.value}")
    if not curve.closed:
        raise ArgumentError(f"curve is open (closure gap {curve.closure_gap:.3e})")
    n = curve.n_segments
    terms = np.empty(n)
    for i in range(n):
        s = i / n
        X = np.asarray(curve.param(s), dtype=float)
        x = flow.forward(t, X)
        terms[i] = C.data(t, x) @ (_F(flow, t, X, method) @ curve.d_param(s))
    return float(np.sum(terms) / n)


def flux(W: EulerianField, flow: FlowMap, surface: MaterialSurface, t: float, method: str = "auto") -> float:
    """``∬ det(W, ∂x/∂s1, ∂x/∂s2) ds1 ds2`` over the image surface."""
    if W.variance is not Variance.TWO_FORM:
        raise ArgumentError(f"flux integrates a two_form field, got {W.variance.value}")
    nodes = _midpoints(surface.n1, surface.n2)
    terms = np.empty(len(nodes))
    for k, (s1, s2) in enumerate(nodes):
        X = np.asarray(surface.param(s1, s2), dtype=float)
        F = _F(flow, t, X, method)
        a, b = surface.d_param(s1, s2)
        terms[k] = np.linalg.det(np.column_stack([W.data(t, flow.forward(t, X)), F @ a, F @ b]))
    return float(np.sum(terms) / len(nodes))


def volume_integral(v: EulerianField, flow: FlowMap, volume: MaterialVolume, t: float, method: str = "auto") -> float:
    """``∭ v det(∂x/∂s1, ∂x/∂s2, ∂x/∂s3)`` over the image volume."""
    if v.variance not in (Variance.THREE_FORM, Variance.SCALAR):
        raise ArgumentError(f"volume_integral integrates a three_form density, got {v.variance.value}")
    nodes = _midpoints(volume.n, volume.n, volume.n)
    terms = np.empty(len(nodes))
    for k, s in enumerate(nodes):
        X = np.asarray(volume.param(*s), dtype=float)
        F = _F(flow, t, X, method)
        jac = np.linalg.det(F @ np.column_stack(volume.d_param(*s)))
        terms[k] = float(v.data(t, flow.forward(t, X))) * jac
    return float(np.sum(terms) / len(nodes))


def invariance_drift(quantity, times: Sequence[float]) -> float:
    """``max_i |q(t_i) - q(t_0)|``.  ``quantity`` is a callable of time or a
    precomputed sequence aligned with ``times``."""
    times = list(times)
    if not times:
        raise ArgumentError("need at least one time")
    values = list(quantity) if not callable(quantity) else [quantity(t) for t in times]
    if len(values) != len(times):
        raise ArgumentError("quantity samples must align with times")
    q0 = values[0]
    return max(abs(q - q0) for q in values)


def integral_rate(quantity: Callable[[float], float], t: float, dt: float = 1e-3) -> float:
    """Central-difference ``d/dt`` of an integral quantity."""
    return float(_numdiff.time_derivative(quantity, t, dt))


def observed_order(errors: Sequence[float], ratio: float = 2.0) -> list:
    """Convergence orders ``log(e_k / e_{k+1}) / log(ratio)`` for successive
    refinements by ``ratio``."""
    return [math.log(a / b) / math.log(ratio) for a, b in zip(errors, errors[1:])]
