"""Command-line front end.

Exit codes: 0 success, 1 a verification criterion failed, 2 usage or input
error, 3 a geometric error at a requested point.
"""

from __future__ import annotations

import argparse
import sys

from . import io
from .catalog import REGISTRY, scenario_names
from .errors import BadParams, GeometryError, UsageError
from .expr import ExprSyntaxError, parse_constant
from .io import ChartFileError
from .metric_core import DEFAULT
from .runner import GridRun, RunSpec, resolve, run_grid
from .submanifold import curvature_report
from .verify import SUITES, run_suite

FORMATS = ("table", "json", "csv", "plotdata")
OUTPUT_KIND = {"table": "report", "json": "json", "csv": "grid_csv", "plotdata": "plotdata"}

EXIT_OK, EXIT_FAILED, EXIT_USAGE, EXIT_GEOMETRY = 0, 1, 2, 3


def _point(text: str) -> tuple[float, float]:
    parts = text.split(",")
    if len(parts) != 2:
        raise UsageError(f"--point expects u,v, got {text!r}")
    return parse_constant(parts[0]), parse_constant(parts[1])


def _grid(text: str) -> tuple[int, int]:
    nu, sep, nv = text.lower().partition("x")
    try:
        if not sep:
            raise ValueError
        return int(nu), int(nv)
    except ValueError:
        raise UsageError(f"--grid expects NUxNV, got {text!r}") from None


def _spec(args) -> RunSpec:
    cfg = DEFAULT if args.h is None else DEFAULT.replace(h=args.h)
    return RunSpec(
        scenario=args.scenario,
        chart_file=args.chart,
        omega=args.omega,
        grid=_grid(args.grid) if getattr(args, "grid", None) else None,
        margin=getattr(args, "margin", None),
        cfg=cfg,
        tol=args.tol,
        outputs=(OUTPUT_KIND[args.format],),
    )


def render_run(run: GridRun, fmt: str) -> str:
    if fmt == "json":
        return io.to_json(run.document()) + "\n"
    if fmt == "csv":
        return io.render_csv(run.rows())
    if fmt == "plotdata":
        return io.render_plotdata(run.rows())
    return io.render_table(run.rows(), run.summary())


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_analyze(args) -> int:
    spec = _spec(args)
    r = resolve(spec)
    report = curvature_report(r.field, _point(args.point), spec.cfg)
    _emit(render_run(GridRun(spec, r.name, [report]), args.format), args.out)
    return EXIT_OK


def cmd_grid(args) -> int:
    run = run_grid(_spec(args))
    _emit(render_run(run, args.format), args.out)
    if run.errors:
        print(f"{len(run.errors)} grid point(s) failed; see summary.error_points", file=sys.stderr)
        return EXIT_GEOMETRY
    return EXIT_OK


def verify_document(suite: str, results) -> dict:
    failed = [r.id for r in results if not r.passed]
    return {
        "suite": suite,
        "criteria": [r.as_dict() for r in results],
        "summary": {"total": len(results), "passed": len(results) - len(failed), "failed": len(failed), "failed_ids": failed},
    }


def render_verify(doc: dict, fmt: str) -> str:
    rows = doc["criteria"]
    if fmt == "json":
        return io.to_json(doc) + "\n"
    if fmt == "csv":
        cols = ("id", "passed", "actual", "tol", "expected", "title", "detail")
        lines = [",".join(cols)]
        for r in rows:
            cells = [io.fmt(r[c]) if not isinstance(r[c], str) else '"' + r[c].replace('"', '""') + '"' for c in cols]
            lines.append(",".join(cells))
        return "\n".join(lines) + "\n"
    cells = [("id", "status", "actual", "expected", "detail")]
    for r in rows:
        actual = "-" if r["actual"] is None else format(r["actual"] + 0.0, ".4g")
        cells.append((r["id"], "PASS" if r["passed"] else "FAIL", actual, r["expected"], r["detail"]))
    widths = [max(len(c[i]) for c in cells) for i in range(4)]
    lines = ["  ".join(c[i].ljust(widths[i]) for i in range(4)) + "  " + c[4] for c in cells]
    s = doc["summary"]
    lines.append("")
    lines.append(f"suite {doc['suite']}: {s['passed']}/{s['total']} criteria passed")
    if s["failed_ids"]:
        lines.append("failed: " + ", ".join(s["failed_ids"]))
    return "\n".join(lines) + "\n"


def cmd_verify(args) -> int:
    if args.format == "plotdata":
        raise UsageError("verify supports --format table, json or csv")
    if args.suite not in SUITES:
        raise UsageError(f"unknown suite {args.suite!r}; choose from {', '.join(SUITES)}")
    cfg = DEFAULT if args.h is None else DEFAULT.replace(h=args.h)
    doc = verify_document(args.suite, run_suite(args.suite, cfg))
    _emit(render_verify(doc, args.format), args.out)
    return EXIT_OK if not doc["summary"]["failed"] else EXIT_FAILED


def cmd_list(args) -> int:
    rows = []
    for name in scenario_names():
        _, params, defaults = REGISTRY[name]
        rows.append({"name": name, "params": {p: d for p, d in zip(params, defaults)}})
    if args.format == "json":
        text = io.to_json(rows) + "\n"
    else:
        width = max(len(r["name"]) for r in rows)
        lines = [f"{'name'.ljust(width)}  params (defaults)"]
        for r in rows:
            ps = ", ".join(f"{k}={v:g}" for k, v in r["params"].items())
            lines.append(f"{r['name'].ljust(width)}  {ps or '-'}")
        text = "\n".join(lines) + "\n"
    _emit(text, args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sasakigeo",
        description="Curvature of unit vector fields viewed as hypersurfaces of the Sasaki unit tangent bundle.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def source(p):
        p.add_argument("--scenario", metavar="NAME[:params]", help="named scenario, e.g. horocycle:1")
        p.add_argument("--chart", metavar="FILE", help="chart definition file")
        p.add_argument("--omega", metavar="EXPR", help="angle of the field against the orthonormal chart frame")
        p.add_argument("--h", type=float, metavar="STEP", help="finite-difference step (default 1e-4)")
        p.add_argument("--tol", type=float, default=1e-8, metavar="T", help="totally-geodesic tolerance on max|Omega|")

    def output(p, formats=FORMATS):
        p.add_argument("--format", choices=formats, default="table")
        p.add_argument("--out", metavar="FILE", help="write output here instead of stdout")

    p = sub.add_parser("analyze", help="full report at one point")
    source(p)
    p.add_argument("--point", required=True, metavar="u,v")
    output(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("grid", help="reports over a u-major grid with a summary")
    source(p)
    p.add_argument("--grid", metavar="NUxNV", help="grid resolution (default from the scenario)")
    p.add_argument("--margin", type=float, metavar="M", help="distance kept from the chart boundary")
    output(p)
    p.set_defaults(func=cmd_grid)

    p = sub.add_parser("verify", help="run an acceptance suite")
    p.add_argument("--suite", default="all", help=f"one of {', '.join(SUITES)}")
    p.add_argument("--h", type=float, metavar="STEP", help="finite-difference step (default 1e-4)")
    output(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("list-scenarios", help="named scenarios and their default parameters")
    output(p, ("table", "json"))
    p.set_defaults(func=cmd_list)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, BadParams, ChartFileError, ExprSyntaxError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except GeometryError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_GEOMETRY
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
