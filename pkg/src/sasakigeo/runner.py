"""Point and grid analyses behind the command line."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .catalog import Grid, Scenario, default_grid, scenario
from .errors import GeometryError, UsageError
from .expr import parse_expr
from .frame_fields import UnitVectorField
from .io import load_chart_file
from .metric_core import DEFAULT, DiffConfig
from .submanifold import CurvatureReport, curvature_report


@dataclass(frozen=True)
class RunSpec:
    scenario: str | None = None
    chart_file: str | None = None
    omega: str | None = None
    grid: tuple[int, int] | None = None
    margin: float | None = None
    cfg: DiffConfig = DEFAULT
    tol: float = 1e-8
    outputs: tuple[str, ...] = ("report",)

    def __post_init__(self):
        if (self.scenario is None) == (self.chart_file is None):
            raise UsageError("give exactly one of --scenario or --chart")
        if self.grid is not None and min(self.grid) < 2:
            raise UsageError("grid resolution must be at least 2x2")
        if not self.outputs:
            raise UsageError("no outputs requested")

    def describe(self) -> dict:
        out = {"scenario": self.scenario, "chart_file": self.chart_file, "omega": self.omega}
        out["grid"] = list(self.grid) if self.grid else None
        out["margin"] = self.margin
        out["h"] = self.cfg.h
        out["h2"] = self.cfg.h2
        out["richardson"] = self.cfg.richardson
        out["tol"] = self.tol
        return out


@dataclass(frozen=True)
class Resolved:
    name: str
    field: UnitVectorField
    grid: Grid
    scenario: Scenario | None = None


def resolve(spec: RunSpec) -> Resolved:
    if spec.scenario is not None:
        sc = scenario(spec.scenario)
        fld = sc.field
        if spec.omega is not None:
            fld = UnitVectorField.from_expr(sc.chart, parse_expr(spec.omega), spec.omega)
        grid = sc.grid
        if spec.margin is not None:
            grid = default_grid(sc.chart, grid.nu, spec.margin)
        name = sc.name
    else:
        cs = load_chart_file(spec.chart_file)
        text = spec.omega
        omega = parse_expr(text) if text is not None else cs.omega
        if omega is None:
            raise UsageError("the chart file has no omega; pass --omega")
        fld = UnitVectorField.from_expr(cs.chart, omega, text or str(omega))
        grid = default_grid(cs.chart, 8, 0.2 if spec.margin is None else spec.margin)
        sc = None
        name = cs.chart.name
    if spec.grid is not None:
        grid = grid.resized(*spec.grid)
    if grid.u0 >= grid.u1 or grid.v0 >= grid.v1:
        raise UsageError(f"margin leaves an empty grid for {fld.chart.domain}")
    spec.cfg.check_against(fld.chart.domain)
    return Resolved(name, fld, grid, sc)


def run_point(spec: RunSpec, p) -> CurvatureReport:
    r = resolve(spec)
    return curvature_report(r.field, np.asarray(p, dtype=float), spec.cfg)


@dataclass
class GridRun:
    spec: RunSpec
    name: str
    reports: list[CurvatureReport]
    errors: list[tuple[tuple[float, float], str]] = field(default_factory=list)

    def rows(self) -> list[dict]:
        return [r.as_dict() for r in self.reports]

    def summary(self) -> dict:
        return summarize(self.reports, self.errors, self.spec.tol)

    def document(self) -> dict:
        return {"spec": dict(self.spec.describe(), resolved=self.name), "points": self.rows(), "summary": self.summary()}


def _stats(xs):
    xs = [x for x in xs if x is not None]
    if not xs:
        return None
    return {"min": min(xs), "max": max(xs), "mean": math.fsum(xs) / len(xs)}


def summarize(reports: list[CurvatureReport], errors=(), tol: float = 1e-8) -> dict:
    out: dict = {"points": len(reports), "errors": len(errors)}
    if errors:
        out["error_points"] = [{"u": p[0], "v": p[1], "message": m} for p, m in errors]
    if not reports:
        return out
    max_om = max(r.omega.max_abs() for r in reports)
    out["max_abs_omega"] = max_om
    out["min_abs_om01"] = min(abs(r.omega.om01) for r in reports)
    out["k_xi"] = _stats([r.k_xi for r in reports])
    out["det_om"] = _stats([r.det_omega for r in reports])
    oracle = [r.residuals.get("oracle") for r in reports]
    out["max_oracle_residual"] = max((x for x in oracle if x is not None), default=None)
    keys = sorted({k for r in reports for k in r.residuals})
    out["residuals"] = {k: _stats([r.residuals.get(k) for r in reports]) for k in keys}
    out["totally_geodesic"] = max_om < tol
    out["verdict"] = "totally geodesic" if max_om < tol else "not totally geodesic"
    return out


def run_grid(spec: RunSpec, oracles: bool = True) -> GridRun:
    r = resolve(spec)
    reports, errors = [], []
    for p in r.grid.points():
        try:
            reports.append(curvature_report(r.field, p, spec.cfg, oracles=oracles))
        except GeometryError as exc:
            errors.append((p, str(exc)))
    return GridRun(spec, r.name, reports, errors)
