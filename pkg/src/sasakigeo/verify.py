"""Acceptance criteria as executable checks, grouped into suites.

Each check returns :class:`CriterionResult` rows; ``run_suite`` evaluates a
whole suite, sharing ensembles and scenario grids between criteria.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .catalog import make_chart, obstruction_omega01, scenario, standard_scenarios
from .ensembles import geodesic_ensemble, random_ensemble, random_fields_on
from .errors import UsageError
from .frame_fields import frame_data
from .metric_core import DEFAULT, DiffConfig
from .sasaki import induced_metric
from .submanifold import closed_form_sff, curvature_report, direct_sectional, sectional_along_xi_from

ENSEMBLE_SIZE = 1000
GEODESIC_SIZE = 1000
SECTIONAL_PER_CHART = 60
# value printed alongside the displayed closed form for hyp_polar(r=1, a=0) at u=1
STATED_SPOT = -0.76588


@dataclass(frozen=True)
class CriterionResult:
    id: str
    title: str
    actual: float
    tol: float
    relation: str = "<"
    target: float | None = None
    detail: str = ""

    @property
    def passed(self) -> bool:
        a = self.actual
        if a is None or (isinstance(a, float) and math.isnan(a)):
            return False
        return {"<": a < self.tol, "<=": a <= self.tol, ">": a > self.tol}[self.relation]

    @property
    def expected(self) -> str:
        what = "value" if self.target is None else f"|value - ({self.target:.17g})|"
        return f"{what} {self.relation} {self.tol:g}"

    def as_dict(self) -> dict:
        return {
            "id": self.id,
            "title": self.title,
            "expected": self.expected,
            "actual": self.actual,
            "tol": self.tol,
            "passed": self.passed,
            "detail": self.detail,
        }


class Context:
    """Lazily computed ensembles and scenario grids shared by the criteria."""

    def __init__(self, cfg: DiffConfig = DEFAULT):
        self.cfg = cfg
        self._grids: dict[str, list] = {}

    @cached_property
    def ensemble(self):
        return [(s, curvature_report(s.field, s.p, self.cfg, s.convention)) for s in random_ensemble(ENSEMBLE_SIZE)]

    @cached_property
    def geodesic(self):
        out = []
        for s in geodesic_ensemble(GEODESIC_SIZE):
            out.append((s, closed_form_sff(frame_data(s.field, s.p, self.cfg, s.convention))))
        return out

    def grid(self, name: str):
        """(scenario, [(point, report)]) over the scenario's own grid."""
        if name not in self._grids:
            sc = scenario(name)
            self._grids[name] = (sc, [(p, curvature_report(sc.field, p, self.cfg)) for p in sc.grid.points()])
        return self._grids[name]


def _max(xs) -> float:
    return float(max(xs))


# ---------------------------------------------------------------------------
# criteria


def c1_frame_identities(ctx: Context):
    rows = [r for _, r in ctx.ensemble]
    n = f"{len(rows)} random samples"
    yield CriterionResult("1a", "lambda^2 = k^2 + kappa^2", _max(r.residuals["lambda_norm"] for r in rows), 1e-6, detail=n)
    yield CriterionResult("1b", "(-1)^s K = e0(lambda) - lambda sigma", _max(r.residuals["frame_gauss"] for r in rows), 1e-6, detail=n)


def c2_forms(ctx: Context):
    rows = [r for _, r in ctx.ensemble]
    n = f"{len(rows)} random samples"
    yield CriterionResult("2a", "form (i) vs form (ii)", _max(r.residuals["forms"] for r in rows), 1e-8, detail=n)
    yield CriterionResult("2b", "form (i) vs Kowalski oracle", _max(r.residuals["kowalski"] for r in rows), 1e-4, detail=n)
    yield CriterionResult("2c", "form (ii) vs Kowalski oracle", _max(r.residuals["kowalski_ii"] for r in rows), 1e-4, detail=n)


def c3_gauss(ctx: Context):
    rows = [r for _, r in ctx.ensemble]
    yield CriterionResult("3a", "K_xi formula vs pullback oracle (random)", _max(r.residuals["oracle"] for r in rows), 1e-4,
                          detail=f"{len(rows)} random samples")  # fmt: skip
    worst, where, count, ident = 0.0, "", 0, _max(r.residuals["gauss_identity"] for r in rows)
    for name in standard_scenarios():
        _, reps = ctx.grid(name)
        for p, r in reps:
            count += 1
            ident = max(ident, r.residuals["gauss_identity"])
            if r.residuals["oracle"] > worst:
                worst, where = r.residuals["oracle"], f"{name} at ({p[0]:.6g},{p[1]:.6g})"
    yield CriterionResult("3b", "K_xi formula vs pullback oracle (scenario grids)", worst, 1e-4,
                          detail=f"{count} grid points; worst {where}")  # fmt: skip
    yield CriterionResult("3c", "K_xi = K_T1M + det Omega", ident, 1e-12, detail="random samples and scenario grids")


def c4_sphere(ctx: Context):
    sc, reps = ctx.grid("sphere_tg")
    n = f"{len(reps)} points"
    yield CriterionResult("4a", "sphere_tg max |Omega|", _max(r.omega.max_abs() for _, r in reps), 1e-8, detail=n)
    yield CriterionResult("4b", "sphere_tg K_xi", _max(abs(r.k_xi - 0.25) for _, r in reps), 1e-6, target=0.25, detail=n)
    dev = _max(
        np.max(np.abs(induced_metric(sc.field, p, ctx.cfg) - np.diag([1.0, 2.0 * (1.0 + math.cos(p[0]))])))
        for p, _ in reps
    )
    yield CriterionResult("4c", "sphere_tg induced metric = diag(1, 2(1+cos u))", dev, 1e-9, detail=n)


def c5_helical(ctx: Context):
    for a in (0, 1, 2):
        sc, reps = ctx.grid(f"flat_helical:{a}")
        tag = f"[a={a}]"
        yield CriterionResult("5a" + tag, "flat_helical max |Omega|", _max(r.omega.max_abs() for _, r in reps), 1e-10)
        yield CriterionResult("5b" + tag, "flat_helical K_xi", _max(abs(r.k_xi) for _, r in reps), 1e-10, target=0.0)
        dev = _max(np.max(np.abs(induced_metric(sc.field, p, ctx.cfg) - np.diag([1.0, 1.0 + a * a]))) for p, _ in reps)
        yield CriterionResult("5c" + tag, "flat_helical induced metric = diag(1, 1+a^2)", dev, 1e-12)


def c6_geodesic_fields(ctx: Context):
    for c in (0.5, 1, 2):
        _, reps = ctx.grid(f"horocycle:{c}")
        yield CriterionResult(f"6a[c={c}]", "horocycle K_xi = -c^2", _max(abs(r.k_xi + c * c) for _, r in reps), 1e-8,
                              target=-c * c)  # fmt: skip
    _, reps = ctx.grid("flat_parallel")
    yield CriterionResult("6b", "flat parallel K_xi = 0", _max(abs(r.k_xi) for _, r in reps), 1e-10, target=0.0)
    for w in ("0", "0.7"):
        _, reps = ctx.grid(f"sphere_geodesic:{w}")
        yield CriterionResult(f"6c[omega0={w}]", "sphere constant-angle K_xi = 0", _max(abs(r.k_xi) for _, r in reps), 1e-6,
                              target=0.0)  # fmt: skip


def c7_foliation(ctx: Context):
    omegas = ("0", "0.7", "pi/2")
    for c in (1, 2):
        runs = [ctx.grid(f"foliation:{c},{w}") for w in omegas]
        reps = [r for _, rs in runs for _, r in rs]
        tag = f"[c={c}]"
        yield CriterionResult("7a" + tag, "foliation K_xi = -c^2", _max(abs(r.k_xi + c * c) for r in reps), 1e-8, target=-c * c)
        yield CriterionResult("7b" + tag, "foliation Omega01 = -c^2/2", _max(abs(r.omega.om01 + c * c / 2) for r in reps), 1e-8,
                              target=-c * c / 2)  # fmt: skip
        yield CriterionResult("7c" + tag, "foliation det Omega = -c^4/4", _max(abs(r.det_omega + c**4 / 4) for r in reps), 1e-8,
                              target=-(c**4) / 4)  # fmt: skip
        metrics = [(p[0], induced_metric(sc.field, p, ctx.cfg)) for sc, rs in runs for p, _ in rs]
        dev = _max(np.max(np.abs(G - np.diag([1.0, 2.0 * math.exp(2 * c * u)]))) for u, G in metrics)
        # the pullback is (1 + c^2) e^{2cu}, which agrees with the stated 2 e^{2cu} only at c = 1
        exact = _max(np.max(np.abs(G - np.diag([1.0, (1 + c * c) * math.exp(2 * c * u)]))) for u, G in metrics)
        yield CriterionResult("7d" + tag, "foliation induced metric = diag(1, 2 e^{2cu})", dev, 1e-8,
                              detail=f"deviation from diag(1, (1+c^2) e^{{2cu}}) is {exact:.1e}")  # fmt: skip
        keys = ("K", "lambda", "om00", "om01", "om11", "det_om", "k_t1m", "k_xi")
        base = [r.as_dict() for _, r in runs[0][1]]
        spread = 0.0
        for _, rs in runs[1:]:
            for b, (_, r) in zip(base, rs):
                d = r.as_dict()
                spread = max(spread, max(abs(d[k] - b[k]) for k in keys))
        yield CriterionResult("7e" + tag, "foliation reports independent of omega0", spread, 1e-10,
                              detail="omega0 in {0, 0.7, pi/2}")  # fmt: skip


def c8_geodesic_det(ctx: Context):
    rows = ctx.geodesic
    worst = _max(om.det for _, om in rows)
    yield CriterionResult("8", "geodesic fields: det Omega <= 0", worst, 1e-10, relation="<=",
                          detail=f"{len(rows)} geodesic-field configurations")  # fmt: skip


def c9_obstruction(ctx: Context):
    for model in ("hyp_exp", "hyp_polar", "hyp_cartesian"):
        match, low = 0.0, math.inf
        for a in (-2, -1, 0, 1, 2):
            _, reps = ctx.grid(f"{model}_obstruction:1,{a}")
            for p, r in reps:
                match = max(match, abs(r.omega.om01 - obstruction_omega01(model, 1.0, a, p[0])))
                low = min(low, abs(r.omega.om01))
        yield CriterionResult(f"9a[{model}]", "pipeline Omega01 vs closed form", match, 1e-8, detail="r=1, a=-2..2")
        yield CriterionResult(f"9b[{model}]", "min grid |Omega01|", low, 0.1, relation=">", detail="r=1, a=-2..2")
    sc = scenario("hyp_polar_obstruction:1,0")
    om01 = curvature_report(sc.field, (1.0, 0.0), ctx.cfg, oracles=False).omega.om01
    yield CriterionResult("9c", "hyp_polar(r=1,a=0) Omega01 at u=1, stated value", abs(om01 - STATED_SPOT), 1e-5,
                          target=STATED_SPOT, detail=f"pipeline {om01:.17g}")  # fmt: skip
    closed = obstruction_omega01("hyp_polar", 1.0, 0.0, 1.0)
    yield CriterionResult("9d", "hyp_polar(r=1,a=0) Omega01 at u=1, displayed expression", abs(om01 - closed), 1e-5,
                          target=closed, detail=f"pipeline {om01:.17g}")  # fmt: skip


CONSTANT_CURVATURE_CHARTS = (("sphere", 1.0), ("hyp_exp", 1.0), ("hyp_polar", 1.0), ("hyp_cartesian", 1.0),
                             ("horocycle", 1.0), ("flat", 1.0), ("flat_polar", 1.0))  # fmt: skip


def c10_sectional(ctx: Context):
    worst, count = 0.0, 0
    for i, (kind, r) in enumerate(CONSTANT_CURVATURE_CHARTS):
        for s in random_fields_on(make_chart(kind, r=r), SECTIONAL_PER_CHART, seed=10 + i):
            d = frame_data(s.field, s.p, ctx.cfg, s.convention)
            worst = max(worst, abs(sectional_along_xi_from(d) - direct_sectional(s.field, s.p, d, ctx.cfg)))
            count += 1
    yield CriterionResult("10a", "closed-form vs direct sectional (constant curvature)", worst, 1e-6,
                          detail=f"{count} random fields on {len(CONSTANT_CURVATURE_CHARTS)} charts")  # fmt: skip
    worst, count = 0.0, 0
    for s in random_fields_on(make_chart("variable"), 4 * SECTIONAL_PER_CHART, seed=30):
        d = frame_data(s.field, s.p, ctx.cfg, s.convention)
        worst = max(worst, abs(sectional_along_xi_from(d) - direct_sectional(s.field, s.p, d, ctx.cfg)))
        count += 1
    yield CriterionResult("10b", "closed-form vs direct sectional (f = exp(u^2/4))", worst, 1e-4,
                          detail=f"{count} random fields")  # fmt: skip


CRITERIA = {
    "1": c1_frame_identities, "2": c2_forms, "3": c3_gauss, "4": c4_sphere, "5": c5_helical, "6": c6_geodesic_fields,
    "7": c7_foliation, "8": c8_geodesic_det, "9": c9_obstruction, "10": c10_sectional,
}  # fmt: skip
SUITES = {
    "identities": ("1", "2", "3"),
    "theorems": ("4", "5", "6", "7", "8", "9"),
    "sectional": ("10",),
    "all": tuple(CRITERIA),
}


def run_criterion(key: str, ctx: Context | None = None) -> list[CriterionResult]:
    return list(CRITERIA[key](ctx or Context()))


def run_suite(name: str, cfg: DiffConfig = DEFAULT) -> list[CriterionResult]:
    if name not in SUITES:
        raise UsageError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    ctx = Context(cfg)
    return [row for key in SUITES[name] for row in CRITERIA[key](ctx)]
