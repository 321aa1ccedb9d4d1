"""Acceptance gate: one test per criterion, each at its stated tolerance.

Every test records a ``[PASS]``/``[FAIL]`` line (also printed at the end of
the pytest run by ``conftest.pytest_terminal_summary``).  Run alone with
``pytest tests/test_acceptance.py -v``.
"""

import math

import numpy as np
import pytest

from lietransport import fieldexpr
from lietransport.cli import main
from lietransport.conservation import (
    ChargeField,
    charge_conservation_residual,
    clebsch_data,
    clebsch_verify,
    induction_residual,
)
from lietransport.harness import config_from_dict, run_suite, write_reports
from lietransport.integrals import box, circle, circulation, disk, flux, invariance_drift, observed_order, volume_integral
from lietransport.kinematics import (
    CATALOG,
    MassField,
    catalog_flow,
    deformation_gradient,
    evolve_deformation,
    expansion_flow,
    mass_density,
    rotation_flow,
    shear_flow,
    spacetime_divergence,
    zero_flow,
)
from lietransport.lie import (
    commutation_defect,
    helmholtz_residual,
    lagrangian_lie_derivative,
    lie_derivative,
    specific_vorticity_residual,
)
from lietransport.suites import REFERENCE_FIELDS, default_mass, scalar_suite, transported_suite, witness_suite
from lietransport.tensors import (
    Variance,
    density_field,
    derived_curl_over_rho,
    derived_div_rho_J,
    derived_gradient,
    derived_wedge,
    eulerian_field,
    transported_field,
)

from conftest import VERDICTS, sample_points
from corpus import GOLDEN, PARAMS, POINTS, oracle

V = Variance
FLOWS = list(CATALOG)


def verdict(number, title, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number:>2}: {title}: {detail}"
    VERDICTS[number] = line
    print(line)
    assert ok, line


def test_01_deformation_consistency():
    worst_ode = worst_fd = 0.0
    for name in FLOWS:
        flow = catalog_flow(name)
        for _, X in sample_points(8, seed=101):
            Fa = deformation_gradient(flow, 1.0, X, "analytic").F
            worst_ode = max(worst_ode, np.linalg.norm(evolve_deformation(flow, X, 1.0, 1e-3).F - Fa))
            worst_fd = max(worst_fd, np.linalg.norm(deformation_gradient(flow, 1.0, X, "finite_difference").F - Fa))
    verdict(1, "deformation routes agree", worst_ode <= 1e-6 and worst_fd <= 1e-6,
            f"RK4 {worst_ode:.2e}, FD {worst_fd:.2e} (tol 1e-6)")


def test_02_transport_iff_zero_lie_derivative():
    worst = {v: 0.0 for v in Variance}
    floor = {v: math.inf for v in Variance}
    for name in FLOWS:
        flow = catalog_flow(name)
        pts = sample_points(100, seed=102)
        for v, fld in transported_suite(flow).items():
            worst[v] = max(worst[v], max(lie_derivative(fld, flow, t, x).norm for t, x in pts))
        for v, fld in witness_suite().items():
            floor[v] = min(floor[v], max(lie_derivative(fld, flow, t, x).norm for t, x in pts))
    ok = max(worst.values()) <= 1e-4 and min(floor.values()) > 1e-2
    verdict(2, "transported <=> zero Lie derivative", ok,
            f"max transported {max(worst.values()):.2e} (tol 1e-4), min witness {min(floor.values()):.2e} (> 1e-2)")


def test_03_commutative_diagram():
    worst = 0.0
    for name in FLOWS:
        flow = catalog_flow(name)
        fields = list(transported_suite(flow).values()) + list(witness_suite().values())
        for fld in fields:
            for t, x in sample_points(20, seed=103):
                a = lie_derivative(fld, flow, t, x).value.data
                b = lagrangian_lie_derivative(fld, flow, t, x).data
                worst = max(worst, float(np.max(np.abs(a - b))))
    verdict(3, "Lie derivative via reference space", worst <= 1e-4, f"max difference {worst:.2e} (tol 1e-4)")


def test_04_kelvin():
    rot = rotation_flow(1.0)
    C = transported_field(rot, V.COVECTOR, lambda X: np.array([-X[1], X[0], 0.0]))
    times = [0.0, 0.25, 0.5, 0.75, 1.0]
    values = [circulation(C, rot, circle(n_segments=512), t) for t in times]
    drift = invariance_drift(values, times)
    ref = max(abs(q - 2 * math.pi) for q in values)
    verdict(4, "circulation constancy", drift <= 1e-6 and ref <= 1e-6,
            f"drift {drift:.2e}, |q - 2pi| {ref:.2e} (tol 1e-6)")


def test_05_flux():
    ex = expansion_flow(1.0)
    W = transported_field(ex, V.TWO_FORM, lambda X: np.array([0.0, 0.0, 1.0]))
    err = max(abs(flux(W, ex, disk(n1=64, n2=64), t) - math.pi) for t in (0.0, 0.3, 0.7))
    # a uniform reference 2-form is integrated exactly by the polar midpoint
    # rule, so the order is measured on a Gaussian reference 2-form
    G = transported_field(ex, V.TWO_FORM, lambda X: np.array([0.0, 0.0, math.exp(-(X[0] ** 2 + X[1] ** 2))]))
    exact = math.pi * (1 - math.exp(-1))
    errors = [abs(flux(G, ex, disk(n1=n, n2=n), 0.3) - exact) for n in (8, 16, 32, 64)]
    order = min(observed_order(errors))
    verdict(5, "flux constancy", err <= 1e-4 and order >= 2.0,
            f"|flux - pi| {err:.2e} (tol 1e-4), observed order {order:.3f} (>= 2)")


def test_06_volume_and_mass():
    # expansion is the catalog flow whose material cube changes volume
    ex = expansion_flow(0.5)
    rho = density_field(default_mass(ex))
    cube = box((-0.5, -0.5, -0.5), (0.5, 0.5, 0.5), n=32)
    drift = invariance_drift(lambda t: volume_integral(rho, ex, cube, t), (0.0, 0.5, 1.0))
    pointwise = 0.0
    for name in FLOWS:
        flow = catalog_flow(name)
        m = default_mass(flow)
        for t, x in sample_points(100, seed=106):
            pointwise = max(pointwise, abs(spacetime_divergence(lambda s, y: mass_density(m, s, y), flow, t, x)))
    verdict(6, "material volume mass", drift <= 1e-5 and pointwise <= 1e-5,
            f"mass drift {drift:.2e}, Div(rho U) {pointwise:.2e} (tol 1e-5)")


def test_07_helmholtz():
    pts = sample_points(100, seed=107)
    frozen = max(helmholtz_residual(catalog_flow(n), t, x).norm for n in ("rotation", "shear") for t, x in pts)
    cascade = catalog_flow("cascade")
    stretch = max(float(np.max(np.abs(helmholtz_residual(cascade, t, x).value.data - [0, 1, 0]))) for t, x in pts)
    agree = 0.0
    for name in FLOWS:
        flow = catalog_flow(name)
        mass = default_mass(flow)
        for t, x in sample_points(30, seed=207):
            r = helmholtz_residual(flow, t, x).value.data
            r4 = specific_vorticity_residual(flow, mass, t, x)
            agree = max(agree, float(np.max(np.abs(mass_density(mass, t, x) * r4 - r))))
    ok = frozen <= 1e-6 and stretch <= 1e-6 and agree <= 1e-6
    verdict(7, "Helmholtz residual", ok,
            f"rotation/shear {frozen:.2e}, cascade - (0,1,0) {stretch:.2e}, rho*r4 - r {agree:.2e} (tol 1e-6)")


def test_08_commutation():
    worst = 0.0
    for name in FLOWS:
        flow = catalog_flow(name)
        for s in scalar_suite().values():
            for t, x in sample_points(20, seed=108):
                worst = max(worst, float(np.max(np.abs(commutation_defect(s, flow, t, x)))))
    verdict(8, "Lie derivative commutes with d", worst <= 1e-4, f"max defect {worst:.2e} (tol 1e-4)")


def test_09_derived_fields():
    worst = 0.0
    for name in FLOWS:
        flow = catalog_flow(name)
        mass = default_mass(flow)
        s = transported_field(flow, V.SCALAR, REFERENCE_FIELDS[V.SCALAR])
        s2 = transported_field(flow, V.SCALAR, lambda X: X[1] * X[2] + math.cos(X[0]))
        J = transported_field(flow, V.VECTOR, REFERENCE_FIELDS[V.VECTOR])
        C = transported_field(flow, V.COVECTOR, REFERENCE_FIELDS[V.COVECTOR])
        for fld in (derived_gradient(s), derived_curl_over_rho(C, mass), derived_div_rho_J(J, mass), derived_wedge(s, s2)):
            for t, x in sample_points(20, seed=109):
                worst = max(worst, lie_derivative(fld, flow, t, x).norm)
    verdict(9, "derived fields are transported", worst <= 1e-4, f"max |d_L| {worst:.2e} (tol 1e-4)")


def test_10_clebsch():
    one = lambda X: 1.0
    f1 = lambda a, b: 1.0
    x3 = eulerian_field(V.SCALAR, lambda t, x: x[2], "s")
    z, sh = zero_flow(), shear_flow(2.0)
    pts = sample_points(50, seed=110)
    static = clebsch_verify(clebsch_data(f1, x3, eulerian_field(V.SCALAR, lambda t, x: x[0], "eta")), MassField(one, z), z, pts)
    eta = eulerian_field(V.SCALAR, lambda t, x: x[0] - 2.0 * t * x[1], "eta")
    sheared = clebsch_verify(clebsch_data(f1, x3, eta), MassField(one, sh), sh, pts)
    broken_pts = [(t, x) for t, x in pts if abs(x[1]) > 0.05]
    broken = clebsch_verify(
        clebsch_data(f1, x3, eulerian_field(V.SCALAR, lambda t, x: x[0], "eta")), MassField(one, sh), sh, broken_pts
    )
    rel = max(abs(abs(s.residual[3]) - 2.0 * abs(s.x[1])) / (2.0 * abs(s.x[1])) for s in broken.samples)
    ok = static.passed and sheared.passed and not broken.passed and rel <= 0.1
    verdict(10, "Clebsch representation", ok,
            f"valid cases {static.max_residual:.2e}/{sheared.max_residual:.2e} (tol 1e-4), "
            f"broken fails={not broken.passed}, rel. error vs gamma|x2| {rel:.2e} (tol 0.1)")


def test_11_charge_and_induction():
    charge = 0.0
    for name in FLOWS:
        flow = catalog_flow(name)
        q = ChargeField(lambda X: 1.0 + X[0] ** 2 + X[1] ** 2, flow)
        for t, x in sample_points(50, seed=111):
            charge = max(charge, abs(charge_conservation_residual(q, t, x)))
    induction = 0.0
    for name in FLOWS:
        flow = catalog_flow(name)
        H = transported_field(flow, V.TWO_FORM, lambda X: np.array([0.0, 0.0, 1.0]))
        for t, x in sample_points(50, seed=211):
            induction = max(induction, float(np.linalg.norm(induction_residual(H, flow, t, x).residual)))
    a = 0.5
    ex = expansion_flow(a)
    e3 = eulerian_field(V.TWO_FORM, lambda t, x: np.array([0.0, 0.0, 1.0]))
    frozen = max(
        float(np.max(np.abs(induction_residual(e3, ex, t, x).residual - [0, 0, 2 * a]))) for t, x in sample_points(50, seed=311)
    )
    ok = charge <= 1e-5 and induction <= 1e-8 and frozen <= 1e-6
    verdict(11, "charge and induction", ok,
            f"charge {charge:.2e} (tol 1e-5), induction {induction:.2e} (tol 1e-8), "
            f"untransported - 2a e3 {frozen:.2e} (tol 1e-6)")


ATOMS = ["x1", "x2", "x3", "t", "gam", "pi", "2", "0.5", "1e-3", "3.25"]
FUNCS = ["sin", "cos", "exp", "log", "sqrt", "abs"]


def random_expression(rng, depth=0):
    """Random well-formed expression from the accepted grammar."""
    roll = rng.random() if depth < 6 else 0.0
    if roll < 0.35:
        return str(rng.choice(ATOMS))
    if roll < 0.55:
        return f"{rng.choice(FUNCS)}({random_expression(rng, depth + 1)})"
    if roll < 0.65:
        return f"-{random_expression(rng, depth + 1)}"
    if roll < 0.75:
        return f"({random_expression(rng, depth + 1)})"
    op = str(rng.choice(["+", "-", "*", "/", "^"]))
    return f"{random_expression(rng, depth + 1)}{op}{random_expression(rng, depth + 1)}"


def test_12_parser():
    mismatches = 0
    for src in GOLDEN:
        e = fieldexpr.parse(src, PARAMS)
        f = fieldexpr.compile_expr(e, PARAMS)
        for t, x in POINTS:
            want = oracle(src, t, x)
            mismatches += fieldexpr.evaluate(e, t, x, PARAMS) != want or f(t, x) != want
    rng = np.random.default_rng(112)
    alphabet = np.array(list("0123456789.eE+-*/^() x123tgamsincoexplqrtbp_,#\t"))
    crashes = bad_positions = parsed = 0
    for k in range(10_000):
        if k % 3 == 0:
            src = "".join(rng.choice(alphabet, size=int(rng.integers(0, 257))))
        else:
            src = random_expression(rng)[:256]
            if k % 3 == 2 and src:
                # single-character mutation of a valid expression
                i = int(rng.integers(0, len(src)))
                src = src[:i] + str(rng.choice(alphabet)) + src[i + 1:]
        try:
            e = fieldexpr.parse(src, ["gam"])
            parsed += 1
            try:
                fieldexpr.evaluate(e, 0.3, (0.5, -1.0, 2.0), {"gam": 2.0})
            except fieldexpr.EvaluationError:
                pass
        except fieldexpr.ParseError as exc:
            bad_positions += not (0 <= exc.position <= len(src) + 1)
        except Exception:
            crashes += 1
    ok = len(GOLDEN) == 50 and mismatches == 0 and crashes == 0 and bad_positions == 0
    verdict(12, "expression parser", ok,
            f"{len(GOLDEN)} golden, {mismatches} mismatches; 10000 fuzz strings, {crashes} crashes, "
            f"{bad_positions} unpositioned errors ({parsed} parsed)")


def test_13_harness_determinism(tmp_path):
    config = config_from_dict({
        "flow": {"name": "expansion", "params": {"a": 0.5}},
        "checks": ["transport-all-variances", "kelvin", "helmholtz", "clebsch"],
        "sampling": {"points": 15, "seed": 2024},
    })
    files = []
    for run in ("first", "second"):
        out = tmp_path / run
        out.mkdir()
        reports = run_suite(config)
        for fmt in ("json", "csv"):
            write_reports(reports, out, fmt, config)
        files.append({p.name: p.read_bytes() for p in sorted(out.iterdir())})
    identical = files[0] == files[1] and len(files[0]) == 2 * len(config.checks) + 1
    cfg = tmp_path / "inject.toml"
    cfg.write_text('checks = ["kelvin", "helmholtz"]\n[flow]\nname = "cascade"\n[sampling]\npoints = 10\n')
    failing = main(["check", "--config", str(cfg)])
    cfg.write_text('checks = ["kelvin"]\n[flow]\nname = "rotation"\n')
    scaled = main(["check", "--config", str(cfg), "--tolerance-scale", "1e-15"])
    passing = main(["check", "--config", str(cfg)])
    ok = identical and failing != 0 and scaled != 0 and passing == 0
    verdict(13, "harness determinism and exit status", ok,
            f"{len(files[0])} files byte-identical={identical}; exit codes injected {failing}, "
            f"tightened {scaled}, clean {passing}")
