"""Chart definition files and report serialization.

Chart files are ``key=value`` lines; ``#`` starts a comment::

    kind=semi_geodesic
    f=exp(u^2/4)
    domain=-2,2,-3,3
    omega=u*v

``kind=general`` takes ``g11``, ``g12`` and ``g22`` instead of ``f``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import sympy as sp

from .expr import ExprSyntaxError, parse_constant, parse_expr
from .metric_core import Domain, MetricChart

KEYS = ("name", "kind", "f", "g11", "g12", "g22", "domain", "omega")


class ChartFileError(ValueError):
    def __init__(self, message: str, line: int, column: int = 1, source: str = "<chart>"):
        self.line = line
        self.column = column
        super().__init__(f"{source}:{line}:{column}: {message}")


@dataclass(frozen=True)
class ChartSpec:
    chart: MetricChart
    omega: sp.Expr | None


def parse_chart_text(text: str, source: str = "<chart>") -> ChartSpec:
    entries: dict[str, tuple[str, int, int]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        if "=" not in line:
            col = len(line) - len(line.lstrip()) + 1
            raise ChartFileError("expected key=value", lineno, col, source)
        key_part, value = line.split("=", 1)
        key = key_part.strip()
        key_col = len(key_part) - len(key_part.lstrip()) + 1
        if key not in KEYS:
            raise ChartFileError(f"unknown key {key!r}; expected one of {', '.join(KEYS)}", lineno, key_col, source)
        if key in entries:
            raise ChartFileError(f"duplicate key {key!r}", lineno, key_col, source)
        entries[key] = (value, lineno, len(key_part) + 1)

    def expr(key):
        value, lineno, offset = entries[key]
        try:
            return parse_expr(value, line=lineno, col_offset=offset)
        except ExprSyntaxError as exc:
            raise ChartFileError(exc.message, lineno, exc.column, source) from exc

    def need(key, why):
        if key not in entries:
            raise ChartFileError(f"missing key {key!r} ({why})", max((e[1] for e in entries.values()), default=1), 1, source)

    need("kind", "semi_geodesic or general")
    kind_value, kind_line, kind_off = entries["kind"]
    kind = kind_value.strip()
    if kind not in ("semi_geodesic", "general"):
        col = kind_off + len(kind_value) - len(kind_value.lstrip()) + 1
        raise ChartFileError(f"kind must be semi_geodesic or general, got {kind!r}", kind_line, col, source)
    need("domain", "u0,u1,v0,v1")
    domain = _parse_domain(*entries["domain"], source)
    name = entries["name"][0].strip() if "name" in entries else source
    if kind == "semi_geodesic":
        need("f", "semi-geodesic charts are du^2 + f^2 dv^2")
        chart = MetricChart.semi_geodesic(name, expr("f"), domain)
    else:
        for k in ("g11", "g12", "g22"):
            need(k, "general charts list all metric components")
        chart = MetricChart.general(name, expr("g11"), expr("g12"), expr("g22"), domain)
    omega = expr("omega") if "omega" in entries else None
    return ChartSpec(chart, omega)


def _parse_domain(value: str, lineno: int, offset: int, source: str) -> Domain:
    parts = value.split(",")
    if len(parts) != 4:
        raise ChartFileError(f"domain needs 4 numbers u0,u1,v0,v1, got {len(parts)}", lineno, offset + 1, source)
    nums = []
    col = offset
    for part in parts:
        try:
            nums.append(parse_constant(part, line=lineno, col_offset=col))
        except ExprSyntaxError as exc:
            raise ChartFileError(exc.message, lineno, exc.column, source) from exc
        col += len(part) + 1
    try:
        return Domain(*nums)
    except ValueError as exc:
        raise ChartFileError(str(exc), lineno, offset + 1, source) from exc


def load_chart_file(path: str) -> ChartSpec:
    with open(path, encoding="utf-8") as fh:
        return parse_chart_text(fh.read(), source=str(path))


# ---------------------------------------------------------------------------
# output


CSV_COLUMNS = (
    "u", "v", "K", "lambda", "k", "kappa", "mu", "sigma", "s", "om00", "om01", "om11",
    "k_t1m", "det_om", "k_xi", "k_xi_oracle", "resid_forms", "resid_oracle",
)  # fmt: skip
PLOT_COLUMNS = ("u", "v", "k_xi", "det_om", "lambda")


def fmt(x) -> str:
    """Fixed 17-significant-digit rendering used by every machine-readable format."""
    if x is None:
        return ""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, int):
        return str(x)
    x = float(x)
    if not math.isfinite(x):
        return "nan" if math.isnan(x) else ("inf" if x > 0 else "-inf")
    return format(x, ".17g")


def to_json(obj, indent: int = 2, _level: int = 0) -> str:
    """Deterministic JSON with floats at 17 significant digits; non-finite floats become null."""
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return fmt(obj) if math.isfinite(obj) else "null"
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{to_json(str(k))}: {to_json(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [pad + to_json(v, indent, _level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    if hasattr(obj, "item"):  # numpy scalar
        return to_json(obj.item(), indent, _level)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def csv_row(row: dict) -> str:
    res = row.get("residuals", {})
    vals = dict(row, resid_forms=res.get("forms"), resid_oracle=res.get("oracle"))
    return ",".join(fmt(vals.get(c)) for c in CSV_COLUMNS)


def render_csv(rows: list[dict]) -> str:
    return "\n".join([",".join(CSV_COLUMNS)] + [csv_row(r) for r in rows]) + "\n"


def render_plotdata(rows: list[dict]) -> str:
    lines = ["# " + " ".join(PLOT_COLUMNS)]
    lines += [" ".join(fmt(r.get(c)) for c in PLOT_COLUMNS) for r in rows]
    return "\n".join(lines) + "\n"


TABLE_COLUMNS = ("u", "v", "K", "lambda", "s", "om00", "om01", "om11", "det_om", "k_t1m", "k_xi", "k_xi_oracle")


def _short(x) -> str:
    if x is None:
        return "-"
    if isinstance(x, bool):
        return "yes" if x else "no"
    if isinstance(x, int):
        return str(int(x))
    return format(float(x) + 0.0, ".6g")


def render_table(rows: list[dict], summary: dict | None = None, columns=TABLE_COLUMNS) -> str:
    cells = [list(columns)] + [[_short(r.get(c)) for c in columns] for r in rows]
    widths = [max(len(row[i]) for row in cells) for i in range(len(columns))]
    lines = ["  ".join(cell.rjust(w) for cell, w in zip(row, widths)) for row in cells]
    if summary:
        lines.append("")
        lines += _summary_lines(summary)
    return "\n".join(lines) + "\n"


def _summary_lines(summary: dict, indent: str = "") -> list[str]:
    out = []
    for k, v in summary.items():
        if isinstance(v, dict) and set(v) == {"min", "max", "mean"}:
            out.append(f"{indent}{k}: min {_short(v['min'])}  max {_short(v['max'])}  mean {_short(v['mean'])}")
        elif isinstance(v, dict):
            out.append(f"{indent}{k}:")
            out += _summary_lines(v, indent + "  ")
        elif isinstance(v, list):
            out.append(f"{indent}{k}:")
            out += [f"{indent}  {item}" for item in v]
        else:
            out.append(f"{indent}{k}: {v if isinstance(v, str) else _short(v)}")
    return out
