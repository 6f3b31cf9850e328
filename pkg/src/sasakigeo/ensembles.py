"""Seeded random configurations for the identity and theorem suites.

Random charts and fields are drawn from a few analytic families whose sympy
templates are compiled once and re-bound per sample.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import sympy as sp

from .catalog import make_chart
from .errors import GeometryError
from .expr import U, V
from .frame_fields import FrameConvention, UnitVectorField, singular_frame, vanishes_nearby
from .metric_core import Domain, MetricChart
from .smooth import Template

LAMBDA_FLOOR = 0.2
BOX = Domain(-1.5, 1.5, -1.5, 1.5)
_P = sp.symbols("p0:6", real=True)
_Q = sp.symbols("q0:6", real=True)


@dataclass(frozen=True, eq=False)
class Sample:
    field: UnitVectorField
    p: np.ndarray
    convention: FrameConvention
    label: str


@lru_cache(maxsize=None)
def _templates():
    p = _P
    f = sp.exp(p[0] * U + p[1] * U**2 / 2 + p[2] * sp.sin(p[3] * U + p[4] * V) / 3)
    h = p[0] * sp.sin(p[1] * U + V) + p[2] * U * V + p[3] * U**2 / 2 + p[4] * sp.cos(V) / 2
    hu, hv = sp.diff(h, U), sp.diff(h, V)
    phi = p[0] * U + p[1] * sp.sin(V) / 2 + p[2] * U * V / 2 + p[3] * sp.cos(p[4] * U) / 3
    q = _Q
    omega = q[0] * U + q[1] * V + q[2] * sp.sin(q[3] * U + q[4] * V) + q[5] * U * V
    return {
        "semi_geodesic": (Template([1, 0, f**2], p[:5]), Template([f], p[:5])),
        "graph": (Template([1 + hu**2, hu * hv, 1 + hv**2], p[:5]), None),
        "conformal": (Template([sp.exp(2 * phi), 0, sp.exp(2 * phi)], p[:5]), None),
        "omega": Template([omega], q),
    }


CHART_FAMILIES = ("semi_geodesic", "graph", "conformal")


def random_chart(rng: np.random.Generator, family: str | None = None) -> MetricChart:
    t = _templates()
    family = family or CHART_FAMILIES[rng.integers(len(CHART_FAMILIES))]
    comps_t, f_t = t[family]
    vals = {s.name: float(x) for s, x in zip(comps_t.params, rng.uniform(-1.0, 1.0, 5))}
    comps = comps_t.bind(**vals)
    f = f_t.bind(**vals) if f_t is not None else None
    kind = "semi_geodesic" if f is not None else "general"
    label = f"{family}(" + ",".join(f"{x:.3f}" for x in vals.values()) + ")"
    return MetricChart(label, BOX, comps, kind, f)


def random_field(rng: np.random.Generator, chart: MetricChart) -> UnitVectorField:
    q = rng.uniform(-1.0, 1.0, 6)
    q[3:5] *= 2.0
    omega = _templates()["omega"].bind(**{s.name: float(x) for s, x in zip(_Q, q)})
    return UnitVectorField(chart, omega, "omega(" + ",".join(f"{x:.3f}" for x in q) + ")")


def random_convention(rng: np.random.Generator) -> FrameConvention:
    return FrameConvention(*(bool(b) for b in rng.integers(0, 2, 3)))


def _accept(fld, p, floor) -> bool:
    try:
        return abs(singular_frame(fld, p).lam) >= floor
    except (GeometryError, FloatingPointError, np.linalg.LinAlgError):
        return False


def random_ensemble(n: int = 1000, seed: int = 0, conventions: bool = True) -> list[Sample]:
    """n random (chart, field, point, convention) samples with |lambda| >= 0.2."""
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < n:
        chart = random_chart(rng)
        fld = random_field(rng, chart)
        p = rng.uniform(-1.0, 1.0, 2)
        if not _accept(fld, p, LAMBDA_FLOOR):
            continue
        conv = random_convention(rng) if conventions else FrameConvention()
        out.append(Sample(fld, p, conv, f"{chart.name} {fld.name} at ({p[0]:.4f},{p[1]:.4f})"))
    return out


# ---------------------------------------------------------------------------
# geodesic fields on the constant-curvature catalog charts


_G = sp.symbols("g0:3", real=True)


def _half_plane(c):
    """Upper half-plane coordinates of the horocycle chart: x = v, y = exp(-c u)/c."""
    return V, sp.exp(-c * U) / c


@lru_cache(maxsize=None)
def _geodesic_templates():
    """Angle templates of geodesic fields, with parameters (g0, g1, g2)."""
    a, b, w = _G
    out = {}
    out["flat_radial"] = sp.atan2(V - b, U - a)
    out["flat_constant"] = a + 0 * U
    dx, dy = U * sp.cos(V) - a, U * sp.sin(V) - b
    # rays from a Cartesian centre against the polar frame (d_r, d_theta / r)
    out["polar_radial"] = sp.atan2(-dx * sp.sin(V) + dy * sp.cos(V), dx * sp.cos(V) + dy * sp.sin(V))
    # great circles through the pole q: direction (p.q) p - q against (d_u, d_v / sin u)
    P = sp.Matrix([sp.sin(U) * sp.cos(V), sp.sin(U) * sp.sin(V), sp.cos(U)])
    X1 = sp.Matrix([sp.cos(U) * sp.cos(V), sp.cos(U) * sp.sin(V), -sp.sin(U)])
    X2 = sp.Matrix([-sp.sin(V), sp.cos(V), 0])
    Q = sp.Matrix([a, b, w])
    d = P.dot(Q) * P - Q
    out["sphere_great_circles"] = sp.atan2(d.dot(X2), d.dot(X1))
    # hyperbolic families in the half-plane picture; X1 = d_u points along -y, X2 along +x
    x, y = _half_plane(w)
    D = (x - a) ** 2 + y**2
    out["hyperbolic_busemann"] = sp.atan2(2 * (x - a) / D, -(2 * y / D - 1 / y))
    gx = 2 * (x - a) / y
    gy = 2 * (y - b) / y - ((x - a) ** 2 + (y - b) ** 2) / y**2
    out["hyperbolic_radial"] = sp.atan2(gx, -gy)
    return {k: Template([e], _G) for k, e in out.items()}


def _draw(name: str, rng: np.random.Generator):
    """(chart, parameter values) for one geodesic family."""
    if name in ("flat_radial", "flat_constant"):
        a, b = rng.uniform(-4.0, 4.0, 2)
        if name == "flat_constant":
            a = rng.uniform(-math.pi, math.pi)
        return make_chart("flat"), (a, b, 0.0)
    if name == "polar_radial":
        a, b = rng.uniform(-1.0, 1.0, 2)
        return make_chart("flat_polar"), (a, b, 0.0)
    if name == "sphere_great_circles":
        q = rng.normal(size=3)
        return make_chart("sphere", r=1), tuple(q / np.linalg.norm(q))
    c = float(rng.choice([0.5, 1.0, 2.0]))
    a = rng.uniform(-3.0, 3.0)
    b = math.exp(-c * rng.uniform(-2.0, 2.0)) / c
    return make_chart("horocycle", c=c), (a, b, c)


GEODESIC_FAMILIES = (
    "flat_constant",
    "flat_radial",
    "hyperbolic_busemann",
    "hyperbolic_radial",
    "polar_radial",
    "sphere_great_circles",
)


def geodesic_field(name: str, rng: np.random.Generator) -> UnitVectorField:
    chart, vals = _draw(name, rng)
    omega = _geodesic_templates()[name].bind(**{s.name: float(x) for s, x in zip(_G, vals)})
    return UnitVectorField(chart, omega, f"{name}(" + ",".join(f"{x:.3f}" for x in vals) + ")")


def geodesic_ensemble(n: int = 1000, seed: int = 1, per_field: int = 4) -> list[Sample]:
    """Random geodesic unit fields (xi-curves are geodesics) with random interior points."""
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < n:
        name = GEODESIC_FAMILIES[rng.integers(len(GEODESIC_FAMILIES))]
        fld = geodesic_field(name, rng)
        d = fld.chart.domain
        for _ in range(per_field):
            p = np.array([rng.uniform(d.u_min + 0.3, d.u_max - 0.3), rng.uniform(-1.0, 1.0)])
            # isolated zeros of nabla xi and the field's own singular point are excluded
            if _accept(fld, p, 0.05) or vanishes_nearby(fld, p):
                out.append(Sample(fld, p, random_convention(rng), f"{fld.name} at ({p[0]:.4f},{p[1]:.4f})"))
    return out[:n]


def random_fields_on(chart: MetricChart, n: int, seed: int = 2, inset: float = 0.3) -> list[Sample]:
    """n random fields with |lambda| >= 0.2 on a fixed chart, at points inside its domain."""
    rng = np.random.default_rng(seed)
    d = chart.domain
    vlo, vhi = max(d.v_min + inset, -1.0), min(d.v_max - inset, 1.0)
    out = []
    while len(out) < n:
        fld = random_field(rng, chart)
        p = np.array([rng.uniform(d.u_min + inset, d.u_max - inset), rng.uniform(vlo, vhi)])
        if _accept(fld, p, LAMBDA_FLOOR):
            out.append(Sample(fld, p, random_convention(rng), f"{chart.name} {fld.name} at ({p[0]:.4f},{p[1]:.4f})"))
    return out
