"""Run configurations, the check registry and the suite runner.

Configuration files are TOML; see ``configs/annotated.toml`` for every key.
"""

from __future__ import annotations

import json
import math
import sys
import time
import zlib
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Optional

import numpy as np

from . import conservation, integrals, lie, suites
from .errors import ArgumentError, ConfigError
from .fieldexpr import EvaluationError, ParseError, compile_expr, evaluate, parse
from .kinematics import (
    CATALOG,
    FlowMap,
    MassField,
    catalog_flow,
    deformation_gradient,
    evolve_deformation,
    jacobi_residual,
    mass_density,
    spacetime_divergence,
    trajectory_flow,
)
from .report import CheckReport, Sample, emit_series, report_to_dict
from .tensors import SHAPES, EulerianField, Variance, derived_curl_over_rho, derived_div_rho_J
from .tensors import density_field, derived_gradient, derived_wedge, eulerian_field, product_fields, transported_field

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

__all__ = ["FlowSpec", "FieldSpec", "RunConfig", "load_config", "config_from_dict", "build_flow", "build_fields",
           "CHECKS", "run_suite", "write_reports", "list_catalog"]


# ---------------------------------------------------------------------------
# configuration

@dataclass(frozen=True)
class FlowSpec:
    name: str = ""
    params: dict = field(default_factory=dict)
    velocity: Optional[tuple] = None
    forward: Optional[tuple] = None
    inverse: Optional[tuple] = None
    n_steps: int = 256


@dataclass(frozen=True)
class FieldSpec:
    name: str
    variance: Variance
    components: tuple
    frame: str = "eulerian"


@dataclass(frozen=True)
class RunConfig:
    flow: FlowSpec
    checks: tuple
    fields: tuple = ()
    tolerances: dict = field(default_factory=dict)
    points: int = 100
    times: tuple = (0.0, 0.25, 0.5, 0.75, 1.0)
    seed: int = 12345
    half_width: float = 1.0
    t_range: tuple = (0.0, 1.0)
    out_dir: Optional[str] = None
    formats: tuple = ("json",)
    tolerance_scale: float = 1.0
    electric: dict = field(default_factory=dict)


def _triplet(value, what):
    if value is None:
        return None
    if not isinstance(value, (list, tuple)) or len(value) != 3 or not all(isinstance(v, str) for v in value):
        raise ConfigError(f"{what} must be a list of 3 expression strings")
    return tuple(value)


def config_from_dict(d: dict) -> RunConfig:
    known = {"checks", "flow", "fields", "tolerances", "sampling", "output", "electric"}
    extra = set(d) - known
    if extra:
        raise ConfigError(f"unknown top-level key(s) {sorted(extra)}; expected {sorted(known)}")
    fl = d.get("flow")
    if not isinstance(fl, dict):
        raise ConfigError("missing [flow] section")
    flow = FlowSpec(
        name=str(fl.get("name", "")),
        params={str(k): float(v) for k, v in fl.get("params", {}).items()},
        velocity=_triplet(fl.get("velocity"), "flow.velocity"),
        forward=_triplet(fl.get("forward"), "flow.forward"),
        inverse=_triplet(fl.get("inverse"), "flow.inverse"),
        n_steps=int(fl.get("n_steps", 256)),
    )
    if not flow.name and flow.velocity is None:
        raise ConfigError("[flow] needs either a catalog 'name' or a 'velocity' triplet")
    if (flow.forward is None) != (flow.inverse is None):
        raise ConfigError("[flow] 'forward' and 'inverse' must be given together")
    fields = []
    for k, f in enumerate(d.get("fields", [])):
        try:
            variance = Variance(f["variance"])
            comps = f["components"]
            name = str(f["name"])
        except (KeyError, ValueError) as exc:
            raise ConfigError(f"fields[{k}]: {exc}") from None
        comps = [comps] if isinstance(comps, str) else list(comps)
        need = int(np.prod(SHAPES[variance], dtype=int))
        if len(comps) != need:
            raise ConfigError(f"field {name!r}: {variance.value} needs {need} component expression(s), got {len(comps)}")
        frame = f.get("frame", "eulerian")
        if frame not in ("eulerian", "reference"):
            raise ConfigError(f"field {name!r}: frame must be 'eulerian' or 'reference'")
        fields.append(FieldSpec(name, variance, tuple(comps), frame))
    electric = d.get("electric", {})
    if not isinstance(electric, dict) or set(electric) - {"permittivity", "entropy"}:
        raise ConfigError("[electric] accepts only 'permittivity' and 'entropy' expression strings")
    checks = d.get("checks")
    if not checks:
        raise ConfigError("no checks requested")
    samp = d.get("sampling", {})
    out = d.get("output", {})
    return RunConfig(
        flow=flow,
        checks=tuple(str(c) for c in checks),
        fields=tuple(fields),
        tolerances={str(k): float(v) for k, v in d.get("tolerances", {}).items()},
        points=int(samp.get("points", 100)),
        times=tuple(float(t) for t in samp.get("times", (0.0, 0.25, 0.5, 0.75, 1.0))),
        seed=int(samp.get("seed", 12345)),
        half_width=float(samp.get("half_width", 1.0)),
        t_range=tuple(float(t) for t in samp.get("t_range", (0.0, 1.0))),
        out_dir=out.get("dir"),
        formats=tuple(out.get("formats", ("json",))),
        electric={str(k): str(v) for k, v in electric.items()},
    )


def load_config(path) -> RunConfig:
    try:
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{path}: {exc}") from None
    return config_from_dict(data)


def _compile_all(srcs, params, what):
    fns = []
    for k, src in enumerate(srcs):
        try:
            fns.append(compile_expr(parse(src, params), params))
        except (ParseError, EvaluationError) as exc:
            raise ConfigError(f"{what}[{k}] {src!r}: {exc}") from None
    return fns


def build_flow(spec: FlowSpec) -> FlowMap:
    if spec.velocity is None:
        return catalog_flow(spec.name, **spec.params)
    name = spec.name or "expression"
    vel = _compile_all(spec.velocity, spec.params, "flow.velocity")

    def velocity(t, x):
        return np.array([f(t, x) for f in vel])

    if spec.forward is None:
        return trajectory_flow(velocity, name=name, params=spec.params, n_steps=spec.n_steps)
    fwd = _compile_all(spec.forward, spec.params, "flow.forward")
    inv = _compile_all(spec.inverse, spec.params, "flow.inverse")
    return FlowMap(
        name=name,
        forward=lambda t, X: np.array([f(t, X) for f in fwd]),
        inverse=lambda t, x: np.array([f(t, x) for f in inv]),
        velocity=velocity,
        params=dict(spec.params),
        description="expression-defined forward/inverse maps",
    )


def build_fields(specs, flow: FlowMap, params=None) -> dict:
    params = dict(params or {})
    out = {}
    for spec in specs:
        fns = _compile_all(spec.components, params, f"field {spec.name!r}")
        shape = SHAPES[spec.variance]

        def raw(t, x, fns=fns, shape=shape):
            return np.array([f(t, x) for f in fns]).reshape(shape)

        if spec.frame == "reference":
            out[spec.name] = transported_field(flow, spec.variance, lambda X, raw=raw: raw(0.0, X), name=spec.name)
        else:
            out[spec.name] = eulerian_field(spec.variance, raw, spec.name, "expression")
    return out


# ---------------------------------------------------------------------------
# checks

@dataclass
class Context:
    flow: FlowMap
    fields: dict
    config: RunConfig
    rng: np.random.Generator

    @property
    def mass(self) -> MassField:
        return suites.default_mass(self.flow)

    def points(self, n=None):
        n = self.config.points if n is None else n
        w = self.config.half_width
        lo, hi = self.config.t_range
        ts = self.rng.uniform(lo, hi, size=n)
        xs = self.rng.uniform(-w, w, size=(n, 3))
        return list(zip(ts.tolist(), xs))


def _sample(t, x, residual, label=""):
    res = np.atleast_1d(np.asarray(residual, dtype=float))
    return Sample(float(t), tuple(float(v) for v in np.asarray(x, dtype=float)), tuple(res.tolist()), label)


def check_deformation(ctx):
    flow = ctx.flow
    ref = "analytic" if flow.analytic_F is not None else "finite_difference"
    out = []
    for _, X in ctx.points(min(ctx.config.points, 20)):
        F_ref = deformation_gradient(flow, 1.0, X, ref).F
        F_ode = evolve_deformation(flow, X, 1.0, 1e-3).F
        F_fd = deformation_gradient(flow, 1.0, X, "finite_difference").F
        out.append(_sample(1.0, X, [np.linalg.norm(F_ode - F_ref), np.linalg.norm(F_fd - F_ref)], "ode,fd"))
    return out, {"reference_route": ref}


def check_jacobi(ctx):
    return [_sample(t, X, jacobi_residual(ctx.flow, t, X)) for t, X in ctx.points()], {}


def check_mass(ctx):
    m = ctx.mass
    return [_sample(t, x, spacetime_divergence(lambda s, y: mass_density(m, s, y), ctx.flow, t, x)) for t, x in ctx.points()], {}


def check_transport(ctx):
    fields = suites.transported_suite(ctx.flow)
    out = []
    for t, x in ctx.points():
        for v, f in fields.items():
            out.append(_sample(t, x, lie.lie_derivative(f, ctx.flow, t, x).norm, v.value))
    return out, {}


DETECTION_FLOOR = 1e-2


def check_transport_converse(ctx):
    """Residual per variance is ``floor / max |d_L witness|``: <= 1 means the
    non-transported witness was detected."""
    pts = ctx.points()
    out, maxima = [], {}
    for v, f in suites.witness_suite().items():
        norms = [lie.lie_derivative(f, ctx.flow, t, x).norm for t, x in pts]
        k = int(np.argmax(norms))
        maxima[v.value] = norms[k]
        out.append(_sample(pts[k][0], pts[k][1], DETECTION_FLOOR / max(norms[k], 1e-300), v.value))
    return out, {"max_lie_norm": maxima, "detection_floor": DETECTION_FLOOR}


def check_diagram(ctx):
    out = []
    for t, x in ctx.points():
        for v, f in suites.witness_suite().items():
            a = lie.lie_derivative(f, ctx.flow, t, x).value.data
            b = lie.lagrangian_lie_derivative(f, ctx.flow, t, x).data
            out.append(_sample(t, x, np.linalg.norm(a - b), v.value))
    return out, {}


def _reference_velocity_covector(flow):
    return lambda X: np.asarray(flow.velocity(0.0, X), dtype=float)


def check_kelvin(ctx):
    flow = ctx.flow
    covectors = {
        "initial-velocity": transported_field(flow, Variance.COVECTOR, _reference_velocity_covector(flow)),
        "swirl": transported_field(flow, Variance.COVECTOR, lambda X: np.array([-X[1], X[0], 0.1 * X[2]])),
        "smooth": transported_field(flow, Variance.COVECTOR, suites.REFERENCE_FIELDS[Variance.COVECTOR]),
    }
    curves = {"unit-circle": integrals.circle(1.0), "offset-circle": integrals.circle(0.5, (0.3, -0.2, 0.4))}
    out, refs = [], {}
    for cname, curve in curves.items():
        for fname, C in covectors.items():
            values = [integrals.circulation(C, flow, curve, t) for t in ctx.config.times]
            refs[f"{cname}/{fname}"] = values[0]
            X0 = curve.param(0.0)
            for t, q in zip(ctx.config.times, values):
                out.append(_sample(t, flow.forward(t, X0), q - values[0], f"{cname}/{fname}"))
    return out, {"initial_circulation": refs}


def check_flux(ctx):
    flow = ctx.flow
    W = transported_field(flow, Variance.TWO_FORM, lambda X: np.array([0.0, 0.0, 1.0]))
    surf = integrals.disk(1.0)
    values = [integrals.flux(W, flow, surf, t) for t in ctx.config.times]
    out = [_sample(t, flow.forward(t, np.zeros(3)), q - values[0], "unit-disk") for t, q in zip(ctx.config.times, values)]
    return out, {"initial_flux": values[0]}


def check_volume(ctx):
    flow = ctx.flow
    rho = EulerianField(Variance.THREE_FORM, lambda t, x: mass_density(ctx.mass, t, x), "derived", "rho")
    vol = integrals.box((0, 0, 0), (1, 1, 1), n=16)
    values = [integrals.volume_integral(rho, flow, vol, t) for t in ctx.config.times]
    out = [_sample(t, flow.forward(t, np.zeros(3)), q - values[0], "unit-cube") for t, q in zip(ctx.config.times, values)]
    return out, {"initial_mass": values[0]}


def check_integral_rate(ctx):
    flow = ctx.flow
    v = EulerianField(Variance.THREE_FORM, lambda t, x: x[0] + 0.5 * t * x[1] ** 2, "builtin", "witness density")
    dv = lie.lie_field(v, flow)
    vol = integrals.box((0, 0, 0), (1, 1, 1), n=8)
    out, rates = [], {}
    for t in ctx.config.times:
        rate = integrals.integral_rate(lambda s: integrals.volume_integral(v, flow, vol, s), t)
        rhs = integrals.volume_integral(dv, flow, vol, t)
        rates[repr(t)] = rate
        out.append(_sample(t, flow.forward(t, np.zeros(3)), rate - rhs, "unit-cube"))
    return out, {"rate": rates}


def check_helmholtz(ctx):
    out = []
    m = ctx.mass
    for t, x in ctx.points():
        r = lie.helmholtz_residual(ctx.flow, t, x).value.data
        r4 = lie.specific_vorticity_residual(ctx.flow, m, t, x)
        out.append(_sample(t, x, np.concatenate([r, mass_density(m, t, x) * r4 - r]), "residual,consistency"))
    return out, {}


def check_commutation(ctx):
    out = []
    for t, x in ctx.points():
        for name, s in suites.scalar_suite().items():
            out.append(_sample(t, x, lie.commutation_defect(s, ctx.flow, t, x), name))
    return out, {}


def _derived_suite(flow, mass):
    tr = suites.transported_suite(flow)
    beta = transported_field(flow, Variance.SCALAR, lambda X: X[2] - 0.5 * X[0] ** 2)
    return {
        "gradient": derived_gradient(tr[Variance.SCALAR]),
        "curl_over_rho": derived_curl_over_rho(tr[Variance.COVECTOR], mass),
        "div_rho_J": derived_div_rho_J(tr[Variance.VECTOR], mass),
        "wedge": derived_wedge(tr[Variance.SCALAR], beta),
    }


def check_derived(ctx):
    fields = _derived_suite(ctx.flow, ctx.mass)
    out = []
    for t, x in ctx.points(min(ctx.config.points, 50)):
        for name, f in fields.items():
            out.append(_sample(t, x, lie.lie_derivative(f, ctx.flow, t, x).norm, name))
    return out, {}


def _isochoric(flow, pts):
    from .kinematics import velocity_gradient

    return all(abs(np.trace(velocity_gradient(flow, t, x))) < 1e-9 for t, x in pts)


def check_products(ctx):
    tr = suites.transported_suite(ctx.flow)
    C, J, W = tr[Variance.COVECTOR], tr[Variance.VECTOR], tr[Variance.TWO_FORM]
    m = ctx.mass
    kinds = {
        "C_dot_J": (C, J),
        "rho_C_J": (m, C, J),
        "J_outer_C": (J, C),
        "det_J_outer_C": (J, C),
        "W_over_rho": (m, W),
        "C_W_over_rho": (m, C, W),
    }
    pts = ctx.points(min(ctx.config.points, 50))
    excluded = []
    if _isochoric(ctx.flow, pts[:5]):
        kinds.update({"rho_W": (m, W), "rho_C_W": (m, C, W)})
    else:
        excluded = ["rho_W", "rho_C_W"]
    fields = {k: product_fields(k, *ops) for k, ops in kinds.items()}
    out = []
    for t, x in pts:
        for name, f in fields.items():
            out.append(_sample(t, x, lie.lie_derivative(f, ctx.flow, t, x).norm, name))
    return out, {"excluded_not_transported_when_volume_changes": excluded}


def check_scalar_law(ctx):
    flow, m = ctx.flow, ctx.mass
    betas = {"one": EulerianField(Variance.SCALAR, lambda t, x: 1.0, "builtin", "one")}
    betas["transported"] = suites.transported_suite(flow)[Variance.SCALAR]
    out = []
    for t, x in ctx.points():
        for name, b in betas.items():
            out.append(_sample(t, x, conservation.divergence_law_residual(b, m, flow, t, x), name))
    return out, {}


def check_clebsch(ctx):
    flow = ctx.flow
    s = transported_field(flow, Variance.SCALAR, lambda X: X[2])
    eta = transported_field(flow, Variance.SCALAR, lambda X: X[0])
    data = conservation.clebsch_data(lambda a, b: 1.0, s, eta)
    mass = MassField(lambda X: 1.0, flow)
    rep = conservation.clebsch_verify(data, mass, flow, ctx.points(min(ctx.config.points, 50)))
    return rep.samples, rep.details


def check_charge(ctx):
    q = conservation.ChargeField(lambda X: 1.0 + X[0] ** 2 + X[1] ** 2, ctx.flow)
    return [_sample(t, x, conservation.charge_conservation_residual(q, t, x)) for t, x in ctx.points()], {}


def _permittivity(ctx):
    """``eps(rho, s)`` with ``s(t, x)`` from ``[electric]``, or ``None``."""
    cfg = ctx.config.electric
    if "permittivity" not in cfg:
        return None
    params = dict(ctx.config.flow.params)
    try:
        eps = parse(cfg["permittivity"], list(params) + ["rho", "s"])
        entropy = compile_expr(parse(cfg.get("entropy", "0"), params), params)
    except ParseError as exc:
        raise ConfigError(f"[electric]: {exc}") from None
    rho = density_field(ctx.mass)

    def at(t, x):
        value = evaluate(eps, t, x, {**params, "rho": float(rho.data(t, x)), "s": entropy(t, x)})
        if not value > 0:
            raise ValueError(f"permittivity {value} <= 0 at t={t}, x={list(x)}")
        return value

    return at


def check_electric(ctx):
    flow = ctx.flow
    D = transported_field(flow, Variance.TWO_FORM, suites.REFERENCE_FIELDS[Variance.TWO_FORM])
    eps = _permittivity(ctx)
    out, eps_seen, e_max = [], [], 0.0
    for _, X in ctx.points(min(ctx.config.points, 20)):
        out.append(_sample(0.0, X, conservation.reference_variation(D, flow, X, ctx.config.times)))
        if eps is not None:
            for t in ctx.config.times:
                x = flow.forward(t, X)
                eps_seen.append(eps(t, x))
                e_max = max(e_max, float(np.linalg.norm(D.data(t, x))) / eps_seen[-1])
    if eps is None:
        return out, {}
    # D = eps E bookkeeping only; eps has no dynamics of its own
    return out, {"permittivity": ctx.config.electric["permittivity"], "eps_min": min(eps_seen),
                 "eps_max": max(eps_seen), "max_abs_E": e_max}


def check_induction(ctx):
    flow = ctx.flow
    H = transported_field(flow, Variance.TWO_FORM, lambda X: np.array([0.0, 0.0, 1.0]))
    out = []
    for t, x in ctx.points():
        ind = conservation.induction_residual(H, flow, t, x)
        same = ind.residual - lie.lie_derivative(H, flow, t, x).value.data
        out.append(_sample(t, x, np.concatenate([ind.residual, [ind.div_H], same]), "residual,divH,crosscheck"))
    return out, {}


def check_trajectory(ctx):
    flow = ctx.flow
    if flow.integrated:
        raise ArgumentError("trajectory cross-validation needs a flow with closed-form inverse")
    twin = trajectory_flow(flow.velocity, name=f"{flow.name}-integrated", grad_velocity=flow.grad_velocity)
    m, m2 = ctx.mass, suites.default_mass(twin)
    out = []
    for t, X in ctx.points(min(ctx.config.points, 10)):
        x = flow.forward(t, X)
        res = [
            np.linalg.norm(twin.forward(t, X) - x),
            np.linalg.norm(twin.inverse(t, x) - flow.inverse(t, x)),
            np.linalg.norm(deformation_gradient(twin, t, X).F - deformation_gradient(flow, t, X).F),
            mass_density(m2, t, x) - mass_density(m, t, x),
        ]
        out.append(_sample(t, x, res, "forward,inverse,F,rho"))
    return out, {"n_steps": twin.n_steps}


def check_fields(ctx):
    if not ctx.fields:
        raise ConfigError("check 'fields' needs at least one [[fields]] entry")
    out = []
    for t, x in ctx.points():
        for name, f in ctx.fields.items():
            out.append(_sample(t, x, lie.lie_derivative(f, ctx.flow, t, x).norm, name))
    return out, {}


@dataclass(frozen=True)
class Check:
    tag: str
    tolerance: float
    run: Callable
    description: str


CHECKS = {
    "deformation": Check("Deformation-gradient-routes", 1e-6, check_deformation, "analytic vs finite-difference vs RK4 F at t=1"),
    "jacobi": Check("Jacobi-determinant", 1e-5, check_jacobi, "d(det F)/dt = det F tr(du/dx)"),
    "mass": Check("Mass-conservation", 1e-5, check_mass, "space-time divergence of rho (1, u)"),
    "transport-all-variances": Check("Transport-iff-zero-Lie", 1e-4, check_transport, "transported field of every variance has zero Lie derivative"),
    "transport-converse": Check("Transport-iff-zero-Lie-converse", 1.0, check_transport_converse, "non-transported witnesses are detected (ratio floor/max <= 1)"),
    "commutative-diagram": Check("Lie-via-reference-space", 1e-4, check_diagram, "Eulerian Lie derivative equals push-forward of d/dt of the pull-back"),
    "kelvin": Check("Kelvin", 1e-6, check_kelvin, "circulation of transported covectors on material loops is constant"),
    "flux": Check("Frozen-flux", 1e-4, check_flux, "flux of a transported 2-form through a material disk is constant"),
    "volume": Check("Material-volume", 1e-5, check_volume, "mass in a material cube is constant"),
    "integral-rate": Check("Integral-of-Lie-derivative", 2e-3, check_integral_rate, "d/dt of a material integral equals the integral of the Lie derivative"),
    "helmholtz": Check("Helmholtz", 1e-6, check_helmholtz, "vorticity is a frozen-in 2-form (and the omega/rho form agrees)"),
    "commutation": Check("Lie-commutes-with-d", 1e-4, check_commutation, "d_L grad s = grad d_L s on the scalar suite"),
    "derived-fields": Check("Derived-transported-fields", 1e-4, check_derived, "grad s, curl C/rho, div(rho J), d alpha ^ d beta are transported"),
    "products": Check("Transported-products", 1e-4, check_products, "products of transported fields are transported"),
    "scalar-law": Check("Divergence-form-law", 1e-5, check_scalar_law, "Div(rho beta U) = 0 for transported beta"),
    "clebsch": Check("Clebsch", 1e-4, check_clebsch, "constructive Clebsch representation of rho J"),
    "charge": Check("Charge-conservation", 1e-5, check_charge, "Div(q U) = 0 for the convected charge density"),
    "electric": Check("Electric-displacement", 1e-6, check_electric, "reference image of a transported D is time independent"),
    "induction": Check("Frozen-in-magnetic-field", 1e-8, check_induction, "induction residual of a transported H, div H, Lie cross-check"),
    "trajectory-crossval": Check("Trajectory-integration", 1e-6, check_trajectory, "RK4-integrated twin of the flow reproduces forward/inverse/F/rho"),
    "fields": Check("User-fields-transported", 1e-4, check_fields, "configured fields have zero Lie derivative"),
}


def _rng(seed, name):
    return np.random.default_rng(np.random.SeedSequence([int(seed), zlib.crc32(name.encode())]))


def run_suite(config: RunConfig, tolerance_scale: Optional[float] = None) -> list:
    """Run every configured check; unknown names and failures inside a
    check become error reports and the suite continues.

    Flow or field definitions that cannot be built raise :class:`ConfigError`.
    """
    scale = config.tolerance_scale if tolerance_scale is None else tolerance_scale
    flow = build_flow(config.flow)
    fields = build_fields(config.fields, flow, config.flow.params)
    reports = []
    for name in config.checks:
        chk = CHECKS.get(name)
        tol = config.tolerances.get(name, chk.tolerance if chk else math.nan) * scale
        rep = CheckReport(name=name, theorem=chk.tag if chk else "unknown", samples=[], tolerance=tol, seed=config.seed)
        start = time.perf_counter()
        if chk is None:
            rep.error = f"unknown check {name!r}; known checks: {', '.join(CHECKS)}"
        else:
            ctx = Context(flow, fields, config, _rng(config.seed, name))
            try:
                rep.samples, rep.details = chk.run(ctx)
            except (ArithmeticError, ValueError, ConfigError) as exc:
                rep.error = f"{type(exc).__name__}: {exc}"
        rep.runtime = time.perf_counter() - start
        reports.append(rep)
    return reports


def write_reports(reports, out_dir, fmt: str, config: RunConfig) -> list:
    """One series file per report plus ``summary.json``."""
    paths = [emit_series(r, fmt, out_dir) for r in reports]
    summary = {
        "flow": {"name": config.flow.name, "params": config.flow.params, "velocity": config.flow.velocity},
        "seed": config.seed,
        "passed": all(r.passed for r in reports),
        "checks": [
            {k: v for k, v in report_to_dict(r).items() if k != "samples"} for r in reports
        ],
    }
    path = Path(out_dir) / "summary.json"
    path.write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return paths + [path]


def catalog_entries(filter_text: str = "") -> list:
    """Flows, field suites and checks as a flat list of dicts."""
    items = []
    for name, (factory, defaults) in CATALOG.items():
        flow = factory(**defaults)
        items.append({"kind": "flow", "name": name, "params": defaults, "closed_form_F": flow.analytic_F is not None,
                      "description": flow.description})
    for name, desc in suites.SUITES.items():
        items.append({"kind": "field-suite", "name": name, "description": desc})
    for name, chk in CHECKS.items():
        items.append({"kind": "check", "name": name, "theorem": chk.tag, "tolerance": chk.tolerance,
                      "description": chk.description})
    if filter_text:
        f = filter_text.lower()
        items = [it for it in items if f in json.dumps(it).lower()]
    return items


def list_catalog(machine: bool = False, filter_text: str = "") -> str:
    items = catalog_entries(filter_text)
    if machine:
        return json.dumps(items, indent=2, sort_keys=True)
    lines = []
    for kind, title in (("flow", "Flows"), ("field-suite", "Field suites"), ("check", "Checks")):
        group = [it for it in items if it["kind"] == kind]
        if not group:
            continue
        lines.append(f"{title}:")
        for it in group:
            if kind == "flow":
                params = ", ".join(f"{k}={v}" for k, v in it["params"].items()) or "no parameters"
                cf = "closed-form F" if it["closed_form_F"] else "numerical F"
                lines.append(f"  {it['name']:<12} ({params}; {cf}) {it['description']}")
            elif kind == "check":
                lines.append(f"  {it['name']:<24} [{it['theorem']}] tol {it['tolerance']:.0e}  {it['description']}")
            else:
                lines.append(f"  {it['name']:<12} {it['description']}")
    return "\n".join(lines)
