import math

import numpy as np
import pytest
import sympy as sp
from hypothesis import given
from hypothesis import strategies as st

from sasakigeo.errors import UsageError
from sasakigeo.expr import U, V, ExprSyntaxError, parse_constant, parse_expr
from sasakigeo.io import (
    CSV_COLUMNS,
    PLOT_COLUMNS,
    ChartFileError,
    fmt,
    load_chart_file,
    parse_chart_text,
    render_csv,
    render_plotdata,
    render_table,
    to_json,
)
from sasakigeo.metric_core import gauss_curvature
from sasakigeo.runner import RunSpec, run_grid, run_point


def test_parse_expr_precedence():
    assert parse_expr("-u^2") == -(U**2)
    assert parse_expr("2^3^2") == 512
    assert parse_expr("1 + 2*u/4 - v") == 1 + U / 2 - V
    assert parse_expr("atan2(v, u)") == sp.atan2(V, U)
    assert parse_expr("1e-3*u") == sp.Float("0.001") * U
    assert parse_expr("coth(u)").equals(sp.cosh(U) / sp.sinh(U))
    assert parse_constant("pi/2") == pytest.approx(math.pi / 2, abs=1e-16)
    assert parse_constant("e") == pytest.approx(math.e, abs=1e-16)


def test_parse_expr_extra_symbols():
    a = sp.Symbol("a")
    assert parse_expr("a*v", {"a": a}) == a * V


@pytest.mark.parametrize(
    "text,col,msg",
    [
        ("u+", 3, "unexpected end of input"),
        ("sin(u", 6, "expected ')'"),
        ("foo(u)", 1, "unknown function 'foo'"),
        ("atan2(u)", 1, "atan2 takes 2"),
        ("2 $ u", 3, "unexpected character '$'"),
        ("w*u", 1, "unknown name 'w'"),
        ("", 1, "empty expression"),
        ("u)", 2, "unexpected ')'"),
    ],
)
def test_parse_expr_errors_carry_columns(text, col, msg):
    with pytest.raises(ExprSyntaxError) as info:
        parse_expr(text)
    assert info.value.column == col and msg in info.value.message
    assert "^" in str(info.value)


def test_parse_constant_rejects_coordinates():
    with pytest.raises(ExprSyntaxError, match="unknown name 'u'"):
        parse_constant("u")


def test_chart_file_round_trip(tmp_path):
    path = tmp_path / "variable.chart"
    path.write_text("# bumpy\nname = bump\nkind=semi_geodesic\nf=exp(u^2/4)  # f\ndomain=-2,2,-pi,pi\nomega=u*v\n")
    cs = load_chart_file(str(path))
    assert cs.chart.name == "bump" and cs.omega == U * V
    assert cs.chart.domain.v_max == pytest.approx(math.pi)
    # K = -f''/f for du^2 + f^2 dv^2
    assert gauss_curvature(cs.chart, (0.5, 0.0)) == pytest.approx(-(0.5 + 0.25**2), abs=1e-12)


def test_general_chart_file():
    cs = parse_chart_text("kind=general\ng11=1\ng12=0\ng22=cosh(u)^2\ndomain=-1,1,-1,1\n")
    assert cs.omega is None
    assert gauss_curvature(cs.chart, (0.3, 0.2)) == pytest.approx(-1.0, abs=1e-10)


@pytest.mark.parametrize(
    "text,line,col,msg",
    [
        ("kind=semi_geodesic\n  colour=red\n", 2, 3, "unknown key 'colour'"),
        ("kind=semi_geodesic\nf exp(u)\n", 2, 1, "expected key=value"),
        ("kind=semi_geodesic\nf=exp(u)+*2\ndomain=-1,1,-1,1\n", 2, 10, "unexpected '*'"),
        ("kind=semi_geodesic\nf=1\ndomain=-1,1,-1\n", 3, 8, "domain needs 4 numbers"),
        ("kind=semi_geodesic\nf=1\ndomain=1,-1,-1,1\n", 3, 8, "empty domain"),
        ("kind=semi_geodesic\nf=1\ndomain=-1,1,-1,u\n", 3, 16, "unknown name 'u'"),
        ("f=1\ndomain=-1,1,-1,1\n", 2, 1, "missing key 'kind'"),
        ("kind=semi_geodesic\ndomain=-1,1,-1,1\n", 2, 1, "missing key 'f'"),
        ("kind = polar\n", 1, 8, "kind must be"),
        ("kind=general\nkind=general\n", 2, 1, "duplicate key"),
        ("kind=general\ng11=1\ng22=1\ndomain=-1,1,-1,1\n", 4, 1, "missing key 'g12'"),
    ],
)
def test_chart_file_errors_carry_line_and_column(text, line, col, msg):
    with pytest.raises(ChartFileError) as info:
        parse_chart_text(text, "c.txt")
    assert (info.value.line, info.value.column) == (line, col)
    assert str(info.value).startswith(f"c.txt:{line}:{col}: ") and msg in str(info.value)


def test_fmt_examples():
    assert fmt(0.1) == "0.10000000000000001"
    assert fmt(-0.25) == "-0.25"
    assert fmt(3) == "3"
    assert fmt(True) == "true"
    assert fmt(None) == ""
    assert (fmt(math.nan), fmt(math.inf), fmt(-math.inf)) == ("nan", "inf", "-inf")
    assert fmt(np.float64(1) / 3) == "0.33333333333333331"


@given(st.floats(allow_nan=False, allow_infinity=False))
def test_fmt_round_trips(x):
    assert float(fmt(x)) == x


def test_to_json_is_fixed_and_handles_non_finite():
    doc = {"b": [1, 2.5, None], "a": {"x": math.nan, "y": np.float64(0.1)}, "ok": True, "s": 'q"'}
    assert to_json(doc) == (
        '{\n  "b": [\n    1,\n    2.5,\n    null\n  ],\n  "a": {\n    "x": null,\n'
        '    "y": 0.10000000000000001\n  },\n  "ok": true,\n  "s": "q\\""\n}'
    )
    assert to_json({}) == "{}" and to_json([]) == "[]"
    with pytest.raises(TypeError):
        to_json(object())


@pytest.fixture(scope="module")
def small_run():
    return run_grid(RunSpec(scenario="foliation:1", grid=(3, 2)))


def test_csv_header_and_rows(small_run):
    text = render_csv(small_run.rows())
    lines = text.splitlines()
    assert lines[0] == (
        "u,v,K,lambda,k,kappa,mu,sigma,s,om00,om01,om11,k_t1m,det_om,k_xi,k_xi_oracle,resid_forms,resid_oracle"
    )
    assert len(lines) == 7 and all(len(row.split(",")) == len(CSV_COLUMNS) for row in lines)
    for row in lines[1:]:
        cells = dict(zip(CSV_COLUMNS, row.split(",")))
        assert float(cells["k_xi"]) == pytest.approx(-1.0, abs=1e-8)
        assert float(cells["k_xi"]) == pytest.approx(float(cells["k_t1m"]) + float(cells["det_om"]), abs=1e-12)
        assert cells["resid_oracle"] != ""


def test_rows_are_u_major(small_run):
    pts = [(r["u"], r["v"]) for r in small_run.rows()]
    assert pts == sorted(pts)
    assert pts[0][0] == pts[1][0] and pts[0][1] < pts[1][1]


def test_plotdata_columns(small_run):
    lines = render_plotdata(small_run.rows()).splitlines()
    assert lines[0] == "# " + " ".join(PLOT_COLUMNS) == "# u v k_xi det_om lambda"
    assert all(len(row.split()) == 5 for row in lines[1:])


def test_table_and_summary(small_run):
    text = render_table(small_run.rows(), small_run.summary())
    assert text.splitlines()[0].split() == ["u", "v", "K", "lambda", "s", "om00", "om01", "om11", "det_om",
                                            "k_t1m", "k_xi", "k_xi_oracle"]  # fmt: skip
    assert "verdict: not totally geodesic" in text
    assert "k_xi: min -1" in text


def test_summary_contents(small_run):
    s = small_run.summary()
    assert s["points"] == 6 and s["errors"] == 0
    assert s["max_abs_omega"] == pytest.approx(0.5, abs=1e-8)
    assert s["max_oracle_residual"] < 1e-4
    assert not s["totally_geodesic"]
    assert {"forms", "gauss_identity", "oracle"} <= set(s["residuals"])


def test_json_document_is_deterministic():
    spec = RunSpec(scenario="horocycle:2", grid=(2, 2))
    a, b = to_json(run_grid(spec).document()), to_json(run_grid(spec).document())
    assert a == b
    assert list(run_grid(spec).document()) == ["spec", "points", "summary"]


def test_run_point_populates_residuals():
    r = run_point(RunSpec(scenario="horocycle:1"), (0.0, 0.0))
    assert r.k_xi == pytest.approx(-1.0, abs=1e-10)
    assert {"forms", "oracle", "kowalski", "sec_direct"} <= set(r.residuals)


def test_grid_errors_are_collected():
    run = run_grid(RunSpec(scenario="sphere_geodesic:0", grid=(3, 2), margin=0.3))
    # the middle u-row sits on the equator, where nabla xi vanishes
    assert len(run.errors) == 2 and len(run.reports) == 4
    assert run.summary()["errors"] == 2 and "error_points" in run.summary()


def test_run_spec_validation(tmp_path):
    with pytest.raises(UsageError):
        RunSpec()
    with pytest.raises(UsageError):
        RunSpec(scenario="sphere_tg", chart_file="x.chart")
    with pytest.raises(UsageError):
        RunSpec(scenario="sphere_tg", grid=(1, 5))
    with pytest.raises(UsageError):
        RunSpec(scenario="sphere_tg", outputs=())
    path = tmp_path / "flat.chart"
    path.write_text("kind=semi_geodesic\nf=1\ndomain=-1,1,-1,1\n")
    with pytest.raises(UsageError, match="no omega"):
        run_grid(RunSpec(chart_file=str(path)))
    with pytest.raises(UsageError, match="empty grid"):
        run_grid(RunSpec(chart_file=str(path), omega="u", margin=1.5))
    run = run_grid(RunSpec(chart_file=str(path), omega="u", grid=(2, 2)))
    assert run.summary()["points"] == 4
