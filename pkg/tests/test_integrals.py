import math

import numpy as np
import pytest
from scipy.integrate import dblquad

from lietransport.errors import ArgumentError
from lietransport.integrals import (
    MaterialCurve,
    MaterialSurface,
    box,
    circle,
    circulation,
    disk,
    flux,
    integral_rate,
    invariance_drift,
    observed_order,
    rectangle,
    volume_integral,
)
from lietransport.kinematics import MassField, catalog_flow, expansion_flow, rotation_flow, shear_flow, zero_flow
from lietransport.lie import lie_field
from lietransport.suites import REFERENCE_FIELDS, reference_density
from lietransport.tensors import Variance, density_field, derived_gradient, eulerian_field, transported_field

V = Variance
TIMES = [0.0, 0.25, 0.5, 0.75, 1.0]


def rotation_covector():
    rot = rotation_flow(1.0)
    return rot, transported_field(rot, V.COVECTOR, lambda X: np.array([-X[1], X[0], 0.0]))


def test_kelvin_rotation_reference_value():
    rot, C = rotation_covector()
    loop = circle()
    values = [circulation(C, rot, loop, t) for t in (0.0, 0.5, 1.0)]
    for q in values:
        assert q == pytest.approx(2 * math.pi, abs=1e-6)
    assert invariance_drift(values, (0.0, 0.5, 1.0)) <= 1e-8


def test_circulation_trivial_cases(flow):
    zero = eulerian_field(V.COVECTOR, lambda t, x: np.zeros(3))
    assert circulation(zero, flow, circle(), 0.5) == 0.0
    s = transported_field(flow, V.SCALAR, REFERENCE_FIELDS[V.SCALAR])
    loop = circle(0.7, (0.1, -0.2, 0.3), n_segments=256)
    for t in (0.0, 0.6):
        assert abs(circulation(derived_gradient(s), flow, loop, t)) <= 1e-7


def test_kelvin_all_flows(flow):
    C = transported_field(flow, V.COVECTOR, REFERENCE_FIELDS[V.COVECTOR])
    loop = circle(0.8, (0.2, -0.1, 0.4), n_segments=512)
    assert invariance_drift(lambda t: circulation(C, flow, loop, t), TIMES) <= 1e-6


def test_circulation_rejects_open_curve_and_wrong_variance():
    segment = MaterialCurve(lambda s: np.array([s, 0.0, 0.0]), 16)
    assert not segment.closed
    _, C = rotation_covector()
    with pytest.raises(ArgumentError):
        circulation(C, zero_flow(), segment, 0.0)
    with pytest.raises(ArgumentError):
        circulation(eulerian_field(V.VECTOR, lambda t, x: x), zero_flow(), circle(), 0.0)
    with pytest.raises(ArgumentError):
        MaterialCurve(circle().param, 4)


def test_expansion_flux_is_pi():
    ex = expansion_flow(1.0)
    W = transported_field(ex, V.TWO_FORM, lambda X: np.array([0.0, 0.0, 1.0]))
    for t in (0.0, 0.3, 0.7):
        assert flux(W, ex, disk(n1=64, n2=64), t) == pytest.approx(math.pi, abs=1e-4)
    zero = eulerian_field(V.TWO_FORM, lambda t, x: np.zeros(3))
    assert flux(zero, ex, disk(n1=8, n2=8), 0.3) == 0.0


def test_flux_orientation_follows_parametrisation():
    e3 = eulerian_field(V.TWO_FORM, lambda t, x: np.array([0.0, 0.0, 1.0]))
    up = rectangle((0, 0, 0), (1, 0, 0), (0, 2, 0), 4, 4)
    down = rectangle((0, 0, 0), (0, 2, 0), (1, 0, 0), 4, 4)
    assert flux(e3, zero_flow(), up, 0.0) == pytest.approx(2.0, abs=1e-14)
    assert flux(e3, zero_flow(), down, 0.0) == pytest.approx(-2.0, abs=1e-14)


def gaussian_two_form(X):
    return np.array([0.0, 0.0, math.exp(-(X[0] ** 2 + X[1] ** 2))])


def test_flux_refinement_order():
    exact, _ = dblquad(lambda r, th: math.exp(-r * r) * r, 0, 2 * math.pi, 0, 1)
    assert exact == pytest.approx(math.pi * (1 - math.exp(-1)), rel=1e-12)
    ex = expansion_flow(1.0)
    W = transported_field(ex, V.TWO_FORM, gaussian_two_form)
    errors = [abs(flux(W, ex, disk(n1=n, n2=n), 0.3) - exact) for n in (8, 16, 32, 64)]
    assert errors[-1] <= 1e-4
    assert min(observed_order(errors)) >= 2.0


def test_magnetic_flux_in_rotation():
    rot = rotation_flow(1.0)
    H = transported_field(rot, V.TWO_FORM, lambda X: np.array([0.0, 0.0, 1.0]))
    patch = disk(0.5, (0.3, 0.2, 0.0), 32, 32)
    q0 = flux(H, rot, patch, 0.0)
    assert q0 == pytest.approx(math.pi * 0.25, abs=1e-12)
    assert invariance_drift(lambda t: flux(H, rot, patch, t), TIMES) <= 1e-10


def test_flux_constancy_all_flows(flow):
    W = transported_field(flow, V.TWO_FORM, REFERENCE_FIELDS[V.TWO_FORM])
    patch = disk(0.6, (0.1, 0.0, 0.2), 24, 24)
    assert invariance_drift(lambda t: flux(W, flow, patch, t), (0.0, 0.5, 1.0)) <= 1e-4


def test_surface_immersion_check():
    assert disk(n1=8, n2=8).check_immersion() > 0
    flat = MaterialSurface(lambda s1, s2: np.array([s1, s1, 0.0]), 4, 4)
    with pytest.raises(ArgumentError):
        flat.check_immersion()


def test_volume_examples():
    ex = expansion_flow(0.5)
    rho = density_field(MassField(lambda X: 1.0, ex))
    cube = box(n=8)
    for t in (0.0, 0.5, 1.0):
        assert volume_integral(rho, ex, cube, t) == pytest.approx(1.0, abs=1e-6)
    zero = eulerian_field(V.THREE_FORM, lambda t, x: 0.0)
    assert volume_integral(zero, ex, cube, 0.5) == 0.0
    x1 = eulerian_field(V.THREE_FORM, lambda t, x: x[0])
    for t in (0.0, 2.0):
        assert volume_integral(x1, zero_flow(), cube, t) == pytest.approx(0.5, abs=1e-14)


@pytest.mark.slow
@pytest.mark.parametrize("name", ["expansion", "cascade"])
def test_mass_drift_fine_grid(name):
    flow = catalog_flow(name)
    rho = density_field(MassField(reference_density, flow))
    cube = box((-0.5, -0.5, -0.5), (0.5, 0.5, 0.5), n=32)
    assert invariance_drift(lambda t: volume_integral(rho, flow, cube, t), (0.0, 1.0)) <= 1e-5


def test_box_validation():
    with pytest.raises(ArgumentError):
        box((0, 0, 0), (1, 0, 1))


def test_drift_examples():
    assert invariance_drift([1.0, 1.0, 1.0], [0, 1, 2]) == 0.0
    assert invariance_drift([math.pi, math.pi + 1e-9, math.pi - 2e-9], [0, 1, 2]) == pytest.approx(2e-9, rel=1e-6)
    with pytest.raises(ArgumentError):
        invariance_drift([1.0, 2.0], [0.0])
    with pytest.raises(ArgumentError):
        invariance_drift([], [])


def test_integral_rate_identity():
    # v = x1 is not transported by shear; d/dt of its integral over the
    # material unit cube is the integral of d_L v = gamma x2, i.e. gamma / 2 at t = 0
    sh = shear_flow(2.0)
    v = eulerian_field(V.THREE_FORM, lambda t, x: x[0])
    cube = box(n=8)
    lhs = integral_rate(lambda t: volume_integral(v, sh, cube, t), 0.0)
    rhs = volume_integral(lie_field(v, sh), sh, cube, 0.0)
    assert rhs == pytest.approx(1.0, abs=1e-8)
    assert abs(lhs - rhs) <= 2e-3
    rhs_later = volume_integral(lie_field(v, sh), sh, cube, 0.5)
    assert abs(integral_rate(lambda t: volume_integral(v, sh, cube, t), 0.5) - rhs_later) <= 2e-3


def test_observed_order_arithmetic():
    assert observed_order([1.0, 0.25, 0.0625]) == pytest.approx([2.0, 2.0])
