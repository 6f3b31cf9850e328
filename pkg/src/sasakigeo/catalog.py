"""Named charts, unit vector fields and their closed-form expectations.

Scenarios are addressed as ``name`` or ``name:p1,p2`` (see :func:`scenario`).
Expected values are sympy expressions in ``u, v`` so that tests can evaluate
them independently of the numerical pipeline.
"""

from __future__ import annotations

import math
from functools import lru_cache
from dataclasses import dataclass, field

import numpy as np
import sympy as sp

from .errors import BadParams
from .expr import U, V, parse_constant
from .frame_fields import UnitVectorField
from .metric_core import Domain, MetricChart

MARGIN = 0.2  # grid inset from coordinate singularities

EXPECTED_KEYS = frozenset(
    {"K", "lambda", "k", "kappa", "mu", "sigma", "om00", "om01", "om11", "det_om", "k_t1m", "k_xi",
     "induced_g11", "induced_g12", "induced_g22"}
)  # fmt: skip


# ---------------------------------------------------------------------------
# charts


def _positive(name, x):
    if not (isinstance(x, (int, float)) and math.isfinite(x) and x > 0):
        raise BadParams(f"{name} must be a positive number, got {x!r}")
    return float(x)


def make_chart(kind: str, r: float = 1.0, c: float = 1.0) -> MetricChart:
    """Catalog chart ``du^2 + f(u)^2 dv^2`` of the given kind.

    Kinds: flat, flat_polar, sphere, hyp_exp, hyp_polar, hyp_cartesian,
    horocycle and variable (f = exp(u^2/4), curvature -(1/2 + u^2/4)).
    """
    r = _positive("r", r)
    c = _positive("c", c)
    R, C = sp.nsimplify(r), sp.nsimplify(c)
    vspan = (-math.pi, 3 * math.pi)
    table = {
        "flat": (sp.Integer(1), 0.0, (-3.0, 3.0), (-3.0, 3.0)),
        "flat_polar": (U, 0.0, (0.0, 4.0), vspan),
        "sphere": (R * sp.sin(U / R), 1 / r**2, (0.0, math.pi * r), vspan),
        "hyp_exp": (R * sp.exp(U / R), -1 / r**2, (-3 * r, 5 * r), vspan),
        "hyp_polar": (R * sp.sinh(U / R), -1 / r**2, (0.0, 5 * r), vspan),
        "hyp_cartesian": (R * sp.cosh(U / R), -1 / r**2, (-5 * r, 5 * r), vspan),
        "horocycle": (sp.exp(C * U), -c * c, (-2.0, 2.0), (-3.0, 3.0)),
        "variable": (sp.exp(U**2 / 4), None, (-2.0, 2.0), (-3.0, 3.0)),
    }
    if kind not in table:
        raise BadParams(f"unknown chart kind {kind!r}; choose from {sorted(table)}")
    f, K, (u0, u1), (v0, v1) = table[kind]
    params = {"flat": {}, "flat_polar": {}, "horocycle": {"c": c}, "variable": {}}.get(kind, {"r": r})
    return MetricChart.semi_geodesic(kind, f, Domain(u0, u1, v0, v1), declared_K=K, **params)


def t1m_coordinate_metric(model: str, u: float, v: float = 0.0, w: float = 0.0, c: float = 1.0) -> np.ndarray:
    """Sasaki metric of T1M in coordinates (u, v, w), w the angle against the chart frame.

    ``sphere_unit`` is the unit sphere chart and ``hyperbolic_c`` the horocycle
    chart of curvature -c^2; both are ``du^2 + f^2 dv^2 + (dw + f' dv)^2``.
    """
    if model == "sphere_unit":
        if not 0.0 < u < math.pi:
            raise BadParams(f"u={u} outside (0, pi)")
        f, fu = math.sin(u), math.cos(u)
    elif model == "hyperbolic_c":
        c = _positive("c", c)
        f = math.exp(c * u)
        fu = c * f
    else:
        raise BadParams(f"unknown bundle model {model!r}")
    return np.array([[1.0, 0.0, 0.0], [0.0, f * f + fu * fu, fu], [0.0, fu, 1.0]])


def section_pullback(metric3: np.ndarray, dw: np.ndarray) -> np.ndarray:
    """Pull a (u, v, w) metric back along the section w = omega(u, v) with gradient dw."""
    jac = np.array([[1.0, 0.0], [0.0, 1.0], [dw[0], dw[1]]])
    return jac.T @ metric3 @ jac


# ---------------------------------------------------------------------------
# closed-form obstruction families


def _lambda_semigeo(f, a):
    """Signed singular value of omega = a v + b on du^2 + f^2 dv^2: (a + f_u) / f."""
    return (a + sp.diff(f, U)) / f


def obstruction_omega01_expr(model: str, r: float = 1.0, a: float = 0.0) -> sp.Expr:
    R = sp.nsimplify(_positive("r", r))
    A = sp.nsimplify(a)
    x = U / R
    if model == "hyp_exp":
        t = A * sp.exp(-x) + 1
        return -((1 / R**2 + 1) * t**2 - A**2 * sp.exp(-2 * x)) / (2 * R**2 * (1 + t**2 / R**2))
    if model == "hyp_polar":
        t = A + sp.cosh(x)
        return -sp.Rational(1, 2) * ((1 / R**2 + 1) * t**2 - A**2 + 1) / (R**2 * sp.sinh(x) ** 2 + t**2)
    if model == "hyp_cartesian":
        t = A + sp.sinh(x)
        return -sp.Rational(1, 2) * ((1 / R**2 + 1) * t**2 - A**2 - 1) / (R**2 * sp.cosh(x) ** 2 + t**2)
    if model == "sphere":
        t = A + sp.cos(x)
        return sp.Rational(1, 2) * ((1 / R**2 - 1) * t**2 + A**2 - 1) / (R**2 * sp.sin(x) ** 2 + t**2)
    if model == "flat_polar":
        return -(A + 1) / (U**2 + (A + 1) ** 2)
    raise BadParams(f"unknown obstruction model {model!r}")


OBSTRUCTION_DOMAIN = {
    "hyp_exp": (-math.inf, math.inf),
    "hyp_polar": (0.0, math.inf),
    "hyp_cartesian": (-math.inf, math.inf),
    "sphere": (0.0, math.pi),
    "flat_polar": (0.0, math.inf),
}


@lru_cache(maxsize=256)
def _obstruction_fn(model: str, r: float, a: float):
    return sp.lambdify(U, obstruction_omega01_expr(model, r, a), "math")


def obstruction_omega01(model: str, r: float, a: float, u: float) -> float:
    """Omega_01 of the family omega = a v + b on the model chart, at coordinate u."""
    fn = _obstruction_fn(model, float(r), float(a))
    lo, hi = OBSTRUCTION_DOMAIN[model]
    scale = r if model in ("sphere",) else 1.0
    if not lo * scale < u < hi * scale:
        raise BadParams(f"u={u} outside the {model} chart")
    return float(fn(u))


# ---------------------------------------------------------------------------
# scenarios


@dataclass(frozen=True)
class Grid:
    u0: float
    u1: float
    v0: float
    v1: float
    nu: int = 8
    nv: int = 8

    def __post_init__(self):
        if self.nu < 2 or self.nv < 2:
            raise BadParams("grid resolution must be at least 2x2")

    def points(self) -> list[tuple[float, float]]:
        """Grid nodes in u-major order."""
        us = np.linspace(self.u0, self.u1, self.nu)
        vs = np.linspace(self.v0, self.v1, self.nv)
        return [(float(u), float(v)) for u in us for v in vs]

    def resized(self, nu: int, nv: int) -> "Grid":
        return Grid(self.u0, self.u1, self.v0, self.v1, nu, nv)

    def inset(self, margin: float) -> "Grid":
        return Grid(self.u0 + margin, self.u1 - margin, self.v0 + margin, self.v1 - margin, self.nu, self.nv)


def default_grid(chart: MetricChart, n: int = 8, margin: float = MARGIN) -> Grid:
    d = chart.domain
    v0, v1 = (0.0, 2 * math.pi) if d.v_max - d.v_min > 10 else (d.v_min + margin, d.v_max - margin)
    return Grid(d.u_min + margin, d.u_max - margin, v0, v1, n, n)


@dataclass(frozen=True, eq=False)
class Scenario:
    name: str
    chart: MetricChart
    field: UnitVectorField
    expected: dict = field(default_factory=dict)
    grid: Grid | None = None
    description: str = ""

    def __post_init__(self):
        unknown = set(self.expected) - EXPECTED_KEYS
        if unknown:
            raise BadParams(f"unknown expected keys {sorted(unknown)}")
        if self.field.chart is not self.chart:
            raise BadParams("field must live on the scenario chart")

    def expect(self, key: str, p) -> float:
        return float(sp.sympify(self.expected[key]).subs({U: p[0], V: p[1]}))


def _field(chart, omega, name):
    return UnitVectorField.from_expr(chart, sp.sympify(omega), name)


def _semigeo_expected(chart: MetricChart, a) -> dict:
    """Expectations shared by omega = a v + b on semi-geodesic charts (e0 along u)."""
    f = chart.f.exprs[0]
    lam = _lambda_semigeo(f, sp.nsimplify(a))
    return {"lambda": sp.Abs(lam), "mu": 0, "om00": 0, "om11": 0,
            "induced_g11": 1, "induced_g12": 0, "induced_g22": f**2 * (1 + lam**2)}  # fmt: skip


def sphere_tg_field() -> Scenario:
    chart = make_chart("sphere", r=1)
    fld = _field(chart, V, "v")
    exp = _semigeo_expected(chart, 1)
    exp.update({"K": 1, "om01": 0, "det_om": 0, "k_xi": sp.Rational(1, 4), "k_t1m": sp.Rational(1, 4),
                "lambda": (1 + sp.cos(U)) / sp.sin(U), "induced_g22": 2 * (1 + sp.cos(U))})  # fmt: skip
    grid = Grid(MARGIN, math.pi - MARGIN, 0.0, 2 * math.pi, 20, 20)
    return Scenario("sphere_tg", chart, fld, exp, grid, "meridian-parallel field on the unit sphere")


def flat_helical_field(a: float = 1.0, b: float = 0.0) -> Scenario:
    chart = make_chart("flat")
    A, B = sp.nsimplify(a), sp.nsimplify(b)
    fld = _field(chart, A * V + B, f"{a:g}*v+{b:g}")
    exp = {"K": 0, "lambda": abs(A), "mu": 0, "om00": 0, "om01": 0, "om11": 0, "det_om": 0,
           "k_t1m": 0, "k_xi": 0, "induced_g11": 1, "induced_g12": 0, "induced_g22": 1 + A**2}  # fmt: skip
    return Scenario(f"flat_helical:{a:g},{b:g}", chart, fld, exp, default_grid(chart), "helical field along u-lines")


def helix_angle(a: float) -> float:
    """Angle between xi(M) and the fibre-free horizontal direction for the flat helical field."""
    return math.acos(1.0 / math.sqrt(1.0 + a * a))


def flat_parallel_field(omega0: float = 0.0) -> Scenario:
    chart = make_chart("flat")
    fld = _field(chart, sp.Float(omega0), f"{omega0:g}")
    exp = {"K": 0, "lambda": 0, "om00": 0, "om01": 0, "om11": 0, "det_om": 0, "k_t1m": 0, "k_xi": 0,
           "induced_g11": 1, "induced_g12": 0, "induced_g22": 1}  # fmt: skip
    return Scenario(f"flat_parallel:{omega0:g}", chart, fld, exp, default_grid(chart), "parallel field in the plane")


def foliation_field(c: float = 1.0, omega0: float = 0.0) -> Scenario:
    chart = make_chart("horocycle", c=c)
    C = sp.nsimplify(c)
    fld = _field(chart, sp.Float(omega0), f"{omega0:g}")
    exp = {"K": -C**2, "lambda": C, "sigma": -C, "mu": 0, "om00": 0, "om11": 0, "om01": -C**2 / 2,
           "det_om": -C**4 / 4, "k_xi": -C**2, "k_t1m": C**4 / 4 - C**2,
           "induced_g11": 1, "induced_g12": 0, "induced_g22": (1 + C**2) * sp.exp(2 * C * U)}  # fmt: skip
    grid = Grid(-1.5, 1.5, -2.0, 2.0, 10, 10)
    return Scenario(f"foliation:{c:g},{omega0:g}", chart, fld, exp, grid, "constant angle to the horocycle normals")


def horocycle_field(c: float = 1.0) -> Scenario:
    sc = foliation_field(c, 0.0)
    exp = dict(sc.expected, k=0)
    return Scenario(f"horocycle:{c:g}", sc.chart, sc.field, exp, sc.grid, "unit normals of the horocycles")


def obstruction_field(model: str, r: float = 1.0, a: float = 0.0) -> Scenario:
    """The candidate family omega = a v on the model chart, with its closed-form Omega_01."""
    chart = make_chart(model, r=r)
    A = sp.nsimplify(a)
    fld = _field(chart, A * V, f"{a:g}*v")
    exp = _semigeo_expected(chart, a)
    exp.update({"K": chart.declared_K, "om01": obstruction_omega01_expr(model, r, a)})
    if model == "sphere":
        grid = Grid(MARGIN * r, (math.pi - MARGIN) * r, 0.0, 2 * math.pi, 8, 8)
    else:
        # away from the isolated zeros of Omega_01 near the origin
        grid = Grid(3.0 * r, 4.5 * r, -1.0, 1.0, 10, 10)
    return Scenario(f"{model}_obstruction:{r:g},{a:g}", chart, fld, exp, grid, "candidate family a v + b")


def flat_polar_obstruction(a: float = 0.0) -> Scenario:
    chart = make_chart("flat_polar")
    A = sp.nsimplify(a)
    fld = _field(chart, A * V, f"{a:g}*v")
    exp = _semigeo_expected(chart, a)
    exp.update({"K": 0, "om01": obstruction_omega01_expr("flat_polar", 1.0, a)})
    grid = Grid(MARGIN + 0.3, 3.0, 0.0, 2 * math.pi, 8, 8)
    return Scenario(f"flat_polar_obstruction:{a:g}", chart, fld, exp, grid, "family a v + b in polar coordinates")


def sphere_geodesic_field(omega0: float = 0.0) -> Scenario:
    chart = make_chart("sphere", r=1)
    fld = _field(chart, sp.Float(omega0), f"{omega0:g}")
    exp = {"K": 1, "lambda": sp.Abs(sp.cot(U)), "k_t1m": sp.Rational(1, 4), "k_xi": 0}
    # lambda = |cot u| vanishes on the equator, an isolated zero of nabla xi; keep nu even
    grid = Grid(MARGIN, math.pi - MARGIN, 0.0, 2 * math.pi, 8, 8)
    return Scenario(f"sphere_geodesic:{omega0:g}", chart, fld, exp, grid, "constant angle on the sphere")


def variable_field(a: float = 2.0) -> Scenario:
    """The family a v on the variable-curvature chart; e0 runs along the curvature gradient."""
    chart = make_chart("variable")
    A = sp.nsimplify(a)
    fld = _field(chart, A * V, f"{a:g}*v")
    exp = _semigeo_expected(chart, a)
    exp["K"] = -(sp.Rational(1, 2) + U**2 / 4)
    return Scenario(f"variable:{a:g}", chart, fld, exp, default_grid(chart, 8, 0.4), "variable curvature surface")


# name -> (builder, parameter names, defaults)
REGISTRY = {
    "sphere_tg": (sphere_tg_field, (), ()),
    "flat_parallel": (flat_parallel_field, ("omega0",), (0.0,)),
    "flat_helical": (flat_helical_field, ("a", "b"), (1.0, 0.0)),
    "horocycle": (horocycle_field, ("c",), (1.0,)),
    "foliation": (foliation_field, ("c", "omega0"), (1.0, 0.0)),
    "hyp_exp_obstruction": (lambda r, a: obstruction_field("hyp_exp", r, a), ("r", "a"), (1.0, 0.0)),
    "hyp_polar_obstruction": (lambda r, a: obstruction_field("hyp_polar", r, a), ("r", "a"), (1.0, 0.0)),
    "hyp_cartesian_obstruction": (lambda r, a: obstruction_field("hyp_cartesian", r, a), ("r", "a"), (1.0, 0.0)),
    "sphere_obstruction": (lambda r, a: obstruction_field("sphere", r, a), ("r", "a"), (1.0, 0.0)),
    "flat_polar_obstruction": (flat_polar_obstruction, ("a",), (0.0,)),
    "sphere_geodesic": (sphere_geodesic_field, ("omega0",), (0.0,)),
    "variable": (variable_field, ("a",), (2.0,)),
}


def scenario(spec: str) -> Scenario:
    """Build a scenario from ``name`` or ``name:p1,p2,...`` (missing trailing params take defaults)."""
    name, _, rest = spec.strip().partition(":")
    if name not in REGISTRY:
        raise BadParams(f"unknown scenario {name!r}; choose from {sorted(REGISTRY)}")
    builder, names, defaults = REGISTRY[name]
    raw = [x for x in rest.split(",")] if rest else []
    if len(raw) > len(names):
        raise BadParams(f"scenario {name} takes at most {len(names)} parameter(s) {names}, got {len(raw)}")
    values = list(defaults)
    for i, text in enumerate(raw):
        try:
            values[i] = parse_constant(text.strip(), col_offset=len(name) + 1 + sum(len(x) + 1 for x in raw[:i]))
        except ValueError as exc:
            raise BadParams(f"bad parameter {names[i]} for scenario {name}: {exc}") from exc
    return builder(*values)


def scenario_names() -> list[str]:
    return sorted(REGISTRY)


def standard_scenarios() -> list[str]:
    """Concrete scenario specs exercised by the verification suites."""
    out = ["sphere_tg", "flat_parallel", "flat_parallel:0.7"]
    out += [f"flat_helical:{a}" for a in (0, 1, 2)]
    out += [f"horocycle:{c}" for c in (0.5, 1, 2)]
    out += [f"foliation:{c},{w}" for c in (1, 2) for w in ("0", "0.7", "pi/2")]
    out += [f"{m}_obstruction:1,{a}" for m in ("hyp_exp", "hyp_polar", "hyp_cartesian") for a in (-2, -1, 0, 1, 2)]
    out += ["sphere_obstruction:1,0.5", "flat_polar_obstruction:0", "flat_polar_obstruction:-1"]
    out += ["sphere_geodesic:0", "sphere_geodesic:0.7", "variable:2"]
    return out
