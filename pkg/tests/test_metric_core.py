import math

import numpy as np
import pytest
import sympy as sp
from conftest import U, V, numeric, sympy_christoffel, sympy_gauss

from sasakigeo.catalog import make_chart
from sasakigeo.errors import BadParams, PointOutOfDomain, StepTooLarge
from sasakigeo.metric_core import (
    DEFAULT,
    DiffConfig,
    Domain,
    MetricChart,
    VectorField,
    christoffel,
    covariant_derivative,
    gauss_curvature,
    metric_eval,
    metric_jet,
    orthonormal_frame,
    riemann,
    scalar_derivative,
)

CATALOG = ("flat", "flat_polar", "sphere", "hyp_exp", "hyp_polar", "hyp_cartesian", "horocycle", "variable")


def interior(chart, rng, n, margin=0.3):
    d = chart.domain
    return np.column_stack(
        [rng.uniform(d.u_min + margin, d.u_max - margin, n), rng.uniform(max(d.v_min, -2) + margin, min(d.v_max, 2) - margin, n)]
    )


def test_metric_eval_examples():
    assert np.allclose(metric_eval(make_chart("flat"), (0.4, -1.0)), np.eye(2), atol=0)
    assert np.allclose(metric_eval(make_chart("sphere"), (math.pi / 2, 0.0)), np.eye(2), atol=1e-15)
    g = metric_eval(make_chart("horocycle", c=1), (1.0, 0.0))
    assert np.allclose(g, [[1, 0], [0, math.e**2]], rtol=1e-15, atol=0)


def test_metric_eval_outside_domain():
    with pytest.raises(PointOutOfDomain) as info:
        metric_eval(make_chart("sphere"), (4.0, 0.0))
    assert info.value.point == (4.0, 0.0)


@pytest.mark.parametrize("kind", CATALOG)
def test_positive_definite_on_random_points(kind, rng):
    chart = make_chart(kind)
    d = chart.domain
    pts = np.column_stack([rng.uniform(d.u_min, d.u_max, 1000), rng.uniform(d.v_min, d.v_max, 1000)])
    pts = pts[[d.contains(p) for p in pts]]
    for p in pts:
        g = metric_eval(chart, p)
        assert g[0, 0] > 0 and np.linalg.det(g) > 0


def test_orthonormal_frame_examples():
    X1, X2 = orthonormal_frame(make_chart("flat"), (0.1, 0.2))
    assert np.allclose(X1.components, [1, 0]) and np.allclose(X2.components, [0, 1])
    _, X2 = orthonormal_frame(make_chart("sphere"), (math.pi / 4, 0.0))
    assert np.allclose(X2.components, [0, math.sqrt(2)], atol=1e-14)
    chart = MetricChart.general("scaled", 2, 0, 2, Domain(-1, 1, -1, 1))
    X1, X2 = orthonormal_frame(chart, (0.0, 0.0))
    assert np.allclose(X1.components, [1 / math.sqrt(2), 0]) and np.allclose(X2.components, [0, 1 / math.sqrt(2)])


def test_orthonormal_frame_is_orthonormal_on_general_chart(rng):
    chart = MetricChart.general("skew", 1 + U**2, U * V / 2, 2 + sp.sin(V), Domain(-1, 1, -1, 1))
    for p in interior(chart, rng, 20, 0.1):
        g = metric_eval(chart, p)
        F = np.column_stack([x.components for x in orthonormal_frame(chart, p)])
        assert np.allclose(F.T @ g @ F, np.eye(2), atol=1e-13)


CHRISTOFFEL_CASES = {
    "horocycle_c1": (1, 0, sp.exp(2 * U)),
    "horocycle_c2": (1, 0, sp.exp(4 * U)),
    "sphere": (1, 0, sp.sin(U) ** 2),
    "graph": (1 + (V * sp.cos(U)) ** 2, (V * sp.cos(U)) * sp.sin(U), 1 + sp.sin(U) ** 2),
    "conformal": (sp.exp(U * V), 0, sp.exp(U * V)),
}


@pytest.mark.parametrize("case", sorted(CHRISTOFFEL_CASES))
@pytest.mark.parametrize("analytic", [True, False])
def test_christoffel_matches_symbolic_oracle(case, analytic, rng):
    comps = CHRISTOFFEL_CASES[case]
    chart = MetricChart.general(case, *comps, Domain(0.2, 2.8, -1.5, 1.5))
    oracle = [[[numeric(e) for e in row] for row in blk] for blk in sympy_christoffel(*comps)]
    cfg = DEFAULT.replace(analytic=analytic)
    tol = 1e-12 if analytic else 1e-7
    for p in interior(chart, rng, 10, 0.1):
        got = christoffel(chart, p, cfg)
        want = np.array([[[float(f(*p)) for f in row] for row in blk] for blk in oracle])
        assert np.max(np.abs(got - want) / (1 + np.abs(want))) < tol
        assert np.array_equal(got, np.swapaxes(got, 1, 2))


def test_christoffel_closed_forms():
    u = 0.7
    g = christoffel(make_chart("horocycle", c=1), (u, 0.3))
    assert g[0, 1, 1] == pytest.approx(-math.exp(2 * u), rel=1e-14)
    assert g[1, 0, 1] == pytest.approx(1.0, rel=1e-14)
    g = christoffel(make_chart("sphere"), (u, 0.3))
    assert g[0, 1, 1] == pytest.approx(-math.sin(u) * math.cos(u), rel=1e-14)
    assert g[1, 0, 1] == pytest.approx(1 / math.tan(u), rel=1e-14)
    assert np.allclose(christoffel(make_chart("flat"), (0.2, 0.1)), 0, atol=0)


def test_metric_compatibility_by_finite_differences(rng):
    chart = MetricChart.general("graph", *CHRISTOFFEL_CASES["graph"], Domain(0.2, 2.8, -1.5, 1.5))
    h = 1e-4
    for p in interior(chart, rng, 10, 0.1):
        g = metric_eval(chart, p)
        gam = christoffel(chart, p)
        for i in range(2):
            e = np.zeros(2)
            e[i] = h
            dg = (metric_eval(chart, p + e) - metric_eval(chart, p - e)) / (2 * h)
            # d_i g_jk = Gamma^l_ij g_lk + Gamma^l_ik g_jl
            model = gam[:, i, :].T @ g + g @ gam[:, i, :]
            assert np.max(np.abs(dg - model)) < 1e-6


@pytest.mark.parametrize(
    "kind,K", [("flat", 0.0), ("sphere", 1.0), ("hyp_exp", -1.0), ("hyp_polar", -1.0), ("hyp_cartesian", -1.0)]
)
def test_gauss_curvature_constant_on_catalog(kind, K):
    chart = make_chart(kind)
    d = chart.domain
    us = np.linspace(d.u_min + 0.2, d.u_max - 0.2, 20)
    vs = np.linspace(-1.0, 1.0, 20)
    vals = np.array([gauss_curvature(chart, (u, v)) for u in us for v in vs])
    assert np.var(vals) < 1e-8
    assert np.max(np.abs(vals - K)) < 1e-10


def test_horocycle_curvature_is_minus_c_squared():
    assert gauss_curvature(make_chart("horocycle", c=2), (0.3, 0.0)) == pytest.approx(-4.0, abs=1e-12)


@pytest.mark.parametrize("kind", CATALOG)
def test_brioschi_agrees_with_semi_geodesic_formula(kind, rng):
    chart = make_chart(kind)
    for p in interior(chart, rng, 10):
        a = gauss_curvature(chart, p, method="semi_geodesic")
        b = gauss_curvature(chart, p, method="brioschi")
        c = gauss_curvature(chart, p, method="riemann")
        assert abs(a - b) < 1e-6 and abs(a - c) < 1e-6


def test_gauss_curvature_general_chart_matches_symbolic(rng):
    comps = CHRISTOFFEL_CASES["graph"]
    chart = MetricChart.general("graph", *comps, Domain(0.2, 2.8, -1.5, 1.5))
    oracle = numeric(sympy_gauss(*comps))
    for p in interior(chart, rng, 8, 0.1):
        assert gauss_curvature(chart, p) == pytest.approx(float(oracle(*p)), abs=1e-9)
        assert gauss_curvature(chart, p, DEFAULT.replace(analytic=False)) == pytest.approx(float(oracle(*p)), abs=1e-4)


def test_gauss_curvature_unknown_method():
    with pytest.raises(BadParams):
        gauss_curvature(make_chart("flat"), (0, 0), method="nope")


def test_riemann_orientation_matches_gauss_curvature():
    # <R(X1, X2) X2, X1> = K with R(X,Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_[X,Y] Z
    for kind, p in (("sphere", (1.0, 0.2)), ("horocycle", (0.4, 0.1)), ("variable", (0.8, -0.3))):
        chart = make_chart(kind)
        R = riemann(chart, p)
        g = metric_eval(chart, p)
        X1, X2 = (x.components for x in orthonormal_frame(chart, p))
        RX = np.einsum("lkij,i,j,k->l", R, X1, X2, X2)
        assert float(RX @ g @ X1) == pytest.approx(gauss_curvature(chart, p), abs=1e-10)


def test_covariant_derivative_examples():
    flat = make_chart("flat")
    assert np.allclose(covariant_derivative(flat, (1, 2), VectorField.constant((3, -1)), (0.1, 0.1)).components, 0)
    horo = make_chart("horocycle", c=1)
    assert np.allclose(covariant_derivative(horo, (1, 0), VectorField.constant((1, 0)), (0.3, 0.2)).components, 0, atol=1e-15)
    sph = make_chart("sphere")
    u = 1.1
    X2 = VectorField(lambda q: np.array([0.0, 1 / math.sin(q[0])]))
    got = covariant_derivative(sph, (0, 1 / math.sin(u)), X2, (u, 0.0)).components
    assert np.allclose(got, [-1 / math.tan(u), 0.0], atol=1e-9)


def test_covariant_derivative_leibniz_and_linearity(rng):
    chart = make_chart("variable")
    Y = VectorField(lambda q: np.array([math.sin(q[0] * q[1]), q[0] ** 2 - q[1]]))
    W = VectorField(lambda q: np.array([q[1], math.cos(q[0])]))
    phi = lambda q: math.exp(q[0]) * (1 + q[1] ** 2)  # noqa: E731
    for p in interior(chart, rng, 5):
        x = rng.normal(size=2)
        phiY = VectorField(lambda q: phi(q) * Y(q))
        lhs = covariant_derivative(chart, x, phiY, p).components
        rhs = scalar_derivative(chart, x, phi, p) * Y(p) + phi(p) * covariant_derivative(chart, x, Y, p).components
        assert np.max(np.abs(lhs - rhs)) < 1e-7
        both = VectorField(lambda q: 2 * Y(q) - 3 * W(q))
        lin = 2 * covariant_derivative(chart, x, Y, p).components - 3 * covariant_derivative(chart, x, W, p).components
        assert np.allclose(covariant_derivative(chart, x, both, p).components, lin, atol=1e-8)


def test_scalar_derivative_examples():
    flat = make_chart("flat")
    assert scalar_derivative(flat, (1, 0), lambda q: q[0], (0.2, 0.3)) == pytest.approx(1.0, abs=1e-12)
    assert scalar_derivative(flat, (0.3, -2), lambda q: 5.0, (0.2, 0.3)) == 0.0
    sph = make_chart("sphere")
    lam = lambda q: (1 + math.cos(q[0])) / math.sin(q[0])  # noqa: E731
    # d/du of (1 + cos u)/sin u at u = 1, frozen from an independent high-precision derivative
    assert scalar_derivative(sph, (1, 0), lam, (1.0, 0.4)) == pytest.approx(-2.1753426496700214, abs=1e-9)
    assert scalar_derivative(sph, (0, 1 / math.sin(1.0)), lam, (1.0, 0.4)) == pytest.approx(0.0, abs=1e-12)


def test_diff_config_validation():
    with pytest.raises(BadParams):
        DiffConfig(h=0)
    with pytest.raises(BadParams):
        DEFAULT.replace(h=0.5).check_against(make_chart("flat").domain)
    DEFAULT.check_against(make_chart("flat").domain)


def test_stencil_near_boundary_raises():
    chart = MetricChart.from_callable("numeric", lambda u, v: (1.0, 0.0, math.exp(2 * u)), Domain(-1, 1, -1, 1))
    assert christoffel(chart, (0.0, 0.0))[1, 0, 1] == pytest.approx(1.0, abs=1e-7)
    with pytest.raises(StepTooLarge):
        christoffel(chart, (1 - 1e-5, 0.0))


def test_metric_jet_analytic_matches_differences(rng):
    chart = make_chart("variable")
    fd = DEFAULT.replace(analytic=False)
    for p in interior(chart, rng, 5):
        a = metric_jet(chart, p, 2)
        b = metric_jet(chart, p, 2, fd)
        assert np.max(np.abs(a[1] - b[1])) < 1e-8
        assert np.max(np.abs(a[2] - b[2])) < 1e-5
