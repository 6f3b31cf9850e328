import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from sasakigeo.catalog import Grid, make_chart
from sasakigeo.ensembles import CHART_FAMILIES, random_chart, random_field
from sasakigeo.errors import GeometryError
from sasakigeo.frame_fields import FrameConvention, check_frame_identities, frame_data, singular_frame
from sasakigeo.metric_core import christoffel, gauss_curvature, metric_eval, riemann
from sasakigeo.submanifold import closed_form_sff, gauss_curvature_xi_from, sectional_along_xi_from

coords = st.floats(-1.0, 1.0)
conventions = st.builds(FrameConvention, st.booleans(), st.booleans(), st.booleans())


@st.composite
def configurations(draw):
    """A random analytic chart and angle field with a point where |lambda| is not tiny."""
    rng = np.random.default_rng(draw(st.integers(0, 2**32 - 1)))
    chart = random_chart(rng, draw(st.sampled_from(CHART_FAMILIES)))
    fld = random_field(rng, chart)
    p = np.array([draw(coords), draw(coords)])
    try:
        ok = abs(singular_frame(fld, p).lam) >= 0.2
    except GeometryError:
        ok = False
    assume(ok)
    return fld, p, draw(conventions)


@given(configurations())
def test_frame_identities_hold_for_random_fields(cfg):
    fld, p, conv = cfg
    res_a, res_b = check_frame_identities(fld, p, convention=conv)
    assert res_a < 1e-6 and res_b < 1e-6


@given(configurations())
def test_two_forms_agree_and_gauss_identity_is_exact(cfg):
    fld, p, conv = cfg
    d = frame_data(fld, p, convention=conv)
    a, b = closed_form_sff(d, "form_i"), closed_form_sff(d, "form_ii")
    assert a.diff(b) < 1e-8
    assert abs(gauss_curvature_xi_from(d) - sectional_along_xi_from(d) - a.det) < 1e-12


@given(configurations(), conventions)
def test_intrinsic_quantities_ignore_the_frame_convention(cfg, other):
    fld, p, conv = cfg
    d1, d2 = frame_data(fld, p, convention=conv), frame_data(fld, p, convention=other)
    a, b = closed_form_sff(d1), closed_form_sff(d2)
    assert abs(a.det - b.det) < 1e-10
    assert abs(a.om01**2 - b.om01**2) < 1e-10
    assert abs(gauss_curvature_xi_from(d1) - gauss_curvature_xi_from(d2)) < 1e-10
    assert abs(d1.lam) == pytest.approx(abs(d2.lam), abs=1e-12)


@given(st.integers(0, 2**32 - 1), coords, coords)
def test_metric_and_curvature_tensor_symmetries(seed, u, v):
    chart = random_chart(np.random.default_rng(seed))
    p = (u, v)
    g = metric_eval(chart, p)
    assert np.allclose(g, g.T) and np.all(np.linalg.eigvalsh(g) > 0)
    gam = christoffel(chart, p)
    assert np.allclose(gam, gam.transpose(0, 2, 1), atol=1e-12)
    R = riemann(chart, p)
    assert np.allclose(R, -R.transpose(0, 1, 3, 2), atol=1e-9)
    low = np.einsum("ml,lkij->mkij", g, R)
    assert np.allclose(low, -low.transpose(1, 0, 2, 3), atol=1e-8)
    # in two dimensions R_{1212} = K det g
    assert low[0, 1, 0, 1] == pytest.approx(gauss_curvature(chart, p) * np.linalg.det(g), abs=1e-8)


@given(st.sampled_from(["sphere", "hyp_exp", "hyp_polar", "hyp_cartesian"]), st.floats(0.3, 3.0), st.floats(0.0, 1.0))
def test_model_charts_have_constant_curvature(kind, r, t):
    chart = make_chart(kind, r=r)
    dom = chart.domain
    u = dom.u_min + 0.2 * r + t * (dom.u_max - dom.u_min - 0.4 * r)
    assert gauss_curvature(chart, (u, 0.3)) == pytest.approx(chart.declared_K, rel=1e-9)


@given(st.integers(2, 12), st.integers(2, 12), st.floats(-5, 5), st.floats(0.1, 5))
def test_grid_is_u_major(nu, nv, u0, width):
    pts = Grid(u0, u0 + width, -1.0, 1.0, nu, nv).points()
    assert len(pts) == nu * nv
    assert pts == sorted(pts)
    assert pts[0] == (u0, -1.0) and pts[-1][1] == 1.0
    assert len({q[0] for q in pts[:nv]}) == 1
