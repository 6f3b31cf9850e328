"""Two-dimensional Riemannian charts and the finite-difference engine.

Index conventions used throughout (all arrays in chart coordinates)::

    g[i, j]            metric
    dg[k, i, j]        d_k g_ij                (d2g, d3g analogously, derivative axes first)
    gamma[k, i, j]     Christoffel symbol Gamma^k_ij
    riem[l, k, i, j]   R(d_i, d_j) d_k = riem[l, k, i, j] d_l

with R(X, Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_[X,Y] Z, so that
the sectional curvature is <R(X, Y)Y, X> for an orthonormal pair.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, NamedTuple

import numpy as np
import sympy as sp

from .errors import BadParams, PointOutOfDomain, StepTooLarge
from .smooth import Smooth

J = np.array([[0.0, -1.0], [1.0, 0.0]])  # rotation by +pi/2 in orthonormal components


class Point2(NamedTuple):
    u: float
    v: float


@dataclass(frozen=True)
class Domain:
    u_min: float
    u_max: float
    v_min: float
    v_max: float

    def __post_init__(self):
        if not (self.u_min < self.u_max and self.v_min < self.v_max):
            raise BadParams(f"empty domain {self}")

    def contains(self, p, margin: float = 0.0) -> bool:
        u, v = float(p[0]), float(p[1])
        return (
            self.u_min + margin < u < self.u_max - margin
            and self.v_min + margin < v < self.v_max - margin
        )

    @property
    def min_side(self) -> float:
        return min(self.u_max - self.u_min, self.v_max - self.v_min)

    def __str__(self):
        return f"({self.u_min:g},{self.u_max:g})x({self.v_min:g},{self.v_max:g})"


@dataclass(frozen=True)
class DiffConfig:
    """Steps and tolerances for every numerical derivative and comparison.

    ``analytic`` selects exact chart/field derivatives when the inputs carry
    them; with ``analytic=False`` everything is differenced from values.
    """

    h: float = 1e-4
    richardson: bool = True
    h2: float = 1e-3
    analytic: bool = True
    degenerate_tol: float = 1e-9
    closed_form_tol: float = 1e-8
    oracle_tol: float = 1e-4

    def __post_init__(self):
        if not (self.h > 0 and self.h2 > 0):
            raise BadParams("finite-difference steps must be positive")

    def check_against(self, domain: Domain) -> None:
        limit = 1e-2 * domain.min_side
        if self.h >= limit or self.h2 >= limit:
            raise BadParams(f"steps h={self.h:g}, h2={self.h2:g} must be below {limit:g} for {domain}")

    def replace(self, **kw) -> "DiffConfig":
        from dataclasses import replace

        return replace(self, **kw)


DEFAULT = DiffConfig()


@dataclass(frozen=True)
class TangentVector:
    base: Point2
    a: float
    b: float

    @property
    def components(self) -> np.ndarray:
        return np.array([self.a, self.b])

    @classmethod
    def at(cls, p, comps) -> "TangentVector":
        return cls(Point2(float(p[0]), float(p[1])), float(comps[0]), float(comps[1]))


def as_components(x) -> np.ndarray:
    if isinstance(x, TangentVector):
        return x.components
    return np.asarray(x, dtype=float)


@dataclass(frozen=True, eq=False)
class MetricChart:
    """A coordinate patch with metric components ``g11, g12, g22``.

    ``components`` is a 3-component :class:`Smooth`. For the semi-geodesic
    kind the metric is ``du^2 + f^2 dv^2`` and ``f`` is kept separately so the
    curvature can be taken as ``-f_uu / f``.
    """

    name: str
    domain: Domain
    components: Smooth
    kind: str = "general"
    f: Smooth | None = None
    declared_K: float | None = None
    meta: dict = field(default_factory=dict)

    @classmethod
    def semi_geodesic(cls, name, f_expr, domain: Domain, declared_K=None, **meta) -> "MetricChart":
        f_expr = sp.sympify(f_expr)
        comps = Smooth.from_exprs([sp.Integer(1), sp.Integer(0), f_expr**2])
        return cls(name, domain, comps, "semi_geodesic", Smooth.from_exprs([f_expr]), declared_K, dict(meta))

    @classmethod
    def general(cls, name, g11, g12, g22, domain: Domain, declared_K=None, **meta) -> "MetricChart":
        comps = Smooth.from_exprs([g11, g12, g22])
        return cls(name, domain, comps, "general", None, declared_K, dict(meta))

    @classmethod
    def from_callable(cls, name, metric_fn: Callable, domain: Domain, **meta) -> "MetricChart":
        """Chart from a numeric ``(u, v) -> (g11, g12, g22)``; derivatives are differenced."""
        return cls(name, domain, Smooth.from_callable(metric_fn, 3), "general", None, None, dict(meta))

    def check(self, p, margin: float = 0.0) -> None:
        if not self.domain.contains(p):
            raise PointOutOfDomain(p, self.domain)
        if margin > 0 and not self.domain.contains(p, margin):
            raise StepTooLarge(p, margin, self.domain)

    def __repr__(self):
        return f"MetricChart({self.name!r}, kind={self.kind!r}, domain={self.domain})"


# ---------------------------------------------------------------------------
# finite differences


def _step_eval(fn, p: np.ndarray, direction: np.ndarray, t: float):
    return np.asarray(fn(p + t * direction), dtype=float)


def directional_derivative(fn, p, direction, h: float, richardson: bool):
    """d/dt fn(p + t*direction) at t=0 by central differences."""
    p = np.asarray(p, dtype=float)
    d = np.asarray(direction, dtype=float)

    def central(step):
        return (_step_eval(fn, p, d, step) - _step_eval(fn, p, d, -step)) / (2.0 * step)

    if not richardson:
        return central(h)
    return (4.0 * central(h / 2.0) - central(h)) / 3.0


def gradient_fd(fn, p, h: float, richardson: bool) -> np.ndarray:
    """Coordinate partials of fn at p, derivative axis first."""
    e = np.eye(2)
    return np.stack([directional_derivative(fn, p, e[k], h, richardson) for k in range(2)])


def hessian_fd(fn, p, h: float, richardson: bool) -> np.ndarray:
    """Second partials of a scalar (or array) function, shape (2, 2, ...)."""
    p = np.asarray(p, dtype=float)

    def h2(step):
        f0 = np.asarray(fn(p), dtype=float)
        out = np.empty((2, 2) + f0.shape)
        e = np.eye(2) * step
        for k in range(2):
            out[k, k] = (np.asarray(fn(p + e[k])) - 2.0 * f0 + np.asarray(fn(p - e[k]))) / step**2
        mixed = (
            np.asarray(fn(p + e[0] + e[1]))
            - np.asarray(fn(p + e[0] - e[1]))
            - np.asarray(fn(p - e[0] + e[1]))
            + np.asarray(fn(p - e[0] - e[1]))
        ) / (4.0 * step**2)
        out[0, 1] = out[1, 0] = mixed
        return out

    if not richardson:
        return h2(h)
    return (4.0 * h2(h / 2.0) - h2(h)) / 3.0


# ---------------------------------------------------------------------------
# metric data


def metric_eval(chart: MetricChart, p) -> np.ndarray:
    chart.check(p)
    g11, g12, g22 = chart.components.value(float(p[0]), float(p[1]))
    return np.array([[g11, g12], [g12, g22]])


def _sym(c: np.ndarray) -> np.ndarray:
    """(3, ...) component stack -> (..., 2, 2) symmetric matrices, derivative axes first."""
    c = np.moveaxis(c, 0, -1)
    out = np.empty(c.shape[:-1] + (2, 2))
    out[..., 0, 0] = c[..., 0]
    out[..., 0, 1] = out[..., 1, 0] = c[..., 1]
    out[..., 1, 1] = c[..., 2]
    return out


def metric_jet(chart: MetricChart, p, order: int, cfg: DiffConfig = DEFAULT) -> list[np.ndarray]:
    """``[g, dg, d2g, d3g][:order+1]`` at p, exact when available."""
    p = np.asarray(p, dtype=float)
    chart.check(p)
    if cfg.analytic and chart.components.exact:
        u, v = p
        return [_sym(chart.components.derivative(n, u, v)) for n in range(order + 1)]
    return _metric_jet_fd(chart, p, order, cfg)


def _metric_jet_fd(chart, p, order, cfg):
    g = lambda q: metric_eval(chart, q)  # noqa: E731
    out = [g(p)]
    if order >= 1:
        chart.check(p, 1.01 * cfg.h)
        out.append(gradient_fd(g, p, cfg.h, cfg.richardson))
    if order >= 2:
        chart.check(p, 1.01 * (cfg.h + cfg.h2))
        d1 = lambda q: gradient_fd(g, q, cfg.h, False)  # noqa: E731
        out.append(gradient_fd(d1, p, cfg.h2, cfg.richardson))
    if order >= 3:
        chart.check(p, 1.01 * (cfg.h + 2 * cfg.h2))
        d2 = lambda q: gradient_fd(lambda r: gradient_fd(g, r, cfg.h, False), q, cfg.h2, False)  # noqa: E731
        out.append(gradient_fd(d2, p, cfg.h2, cfg.richardson))
    return out


def frame_jet(g: np.ndarray, dg: np.ndarray | None = None):
    """Gram-Schmidt frame of (d_u, d_v) and, given dg, its coordinate partials.

    Returns ``F`` with columns X1, X2 (coordinate components) and ``dF[k]``.
    """
    g11, g12, g22 = g[0, 0], g[0, 1], g[1, 1]
    det = g11 * g22 - g12 * g12
    q1 = g11**-0.5
    s = g11 * det
    q2 = s**-0.5
    F = np.array([[q1, -g12 * q2], [0.0, g11 * q2]])
    if dg is None:
        return F, None
    dF = np.empty((2, 2, 2))
    for k in range(2):
        a11, a12, a22 = dg[k, 0, 0], dg[k, 0, 1], dg[k, 1, 1]
        ddet = a11 * g22 + g11 * a22 - 2.0 * g12 * a12
        dq1 = -0.5 * g11**-1.5 * a11
        dq2 = -0.5 * s**-1.5 * (a11 * det + g11 * ddet)
        dF[k] = [[dq1, -a12 * q2 - g12 * dq2], [0.0, a11 * q2 + g11 * dq2]]
    return F, dF


def orthonormal_frame(chart: MetricChart, p) -> tuple[TangentVector, TangentVector]:
    F, _ = frame_jet(metric_eval(chart, p))
    return TangentVector.at(p, F[:, 0]), TangentVector.at(p, F[:, 1])


def christoffel_jet(g, dg, d2g=None, d3g=None):
    """Gamma and its first/second coordinate partials from metric jets."""
    ginv = np.linalg.inv(g)
    # lower[l, i, j] = 1/2 (d_i g_lj + d_j g_li - d_l g_ij)
    lower = 0.5 * (np.einsum("ilj->lij", dg) + np.einsum("jli->lij", dg) - dg)
    gam = ginv @ lower.reshape(2, 4)
    gam = gam.reshape(2, 2, 2)
    out = [gam]
    if d2g is None:
        return out
    dginv = -np.einsum("ab,mbc,cd->mad", ginv, dg, ginv)
    dlower = 0.5 * (np.einsum("milj->mlij", d2g) + np.einsum("mjli->mlij", d2g) - d2g)
    dgam = np.einsum("mkl,lij->mkij", dginv, lower) + np.einsum("kl,mlij->mkij", ginv, dlower)
    out.append(dgam)
    if d3g is None:
        return out
    d2ginv = (
        -np.einsum("nab,mbc,cd->nmad", dginv, dg, ginv)
        - np.einsum("ab,nmbc,cd->nmad", ginv, d2g, ginv)
        - np.einsum("ab,mbc,ncd->nmad", ginv, dg, dginv)
    )
    d2lower = 0.5 * (np.einsum("nmilj->nmlij", d3g) + np.einsum("nmjli->nmlij", d3g) - d3g)
    d2gam = (
        np.einsum("nmkl,lij->nmkij", d2ginv, lower)
        + np.einsum("mkl,nlij->nmkij", dginv, dlower)
        + np.einsum("nkl,mlij->nmkij", dginv, dlower)
        + np.einsum("kl,nmlij->nmkij", ginv, d2lower)
    )
    out.append(d2gam)
    return out


def christoffel(chart: MetricChart, p, cfg: DiffConfig = DEFAULT) -> np.ndarray:
    g, dg = metric_jet(chart, p, 1, cfg)
    return christoffel_jet(g, dg)[0]


def riemann_from(gam: np.ndarray, dgam: np.ndarray) -> np.ndarray:
    """riem[l,k,i,j] = d_i G^l_jk - d_j G^l_ik + G^l_im G^m_jk - G^l_jm G^m_ik."""
    r = np.einsum("iljk->lkij", dgam) - np.einsum("jlik->lkij", dgam)
    r += np.einsum("lim,mjk->lkij", gam, gam) - np.einsum("ljm,mik->lkij", gam, gam)
    return r


def riemann_deriv_from(gam, dgam, d2gam) -> np.ndarray:
    """d_n riem[l,k,i,j], derivative axis first."""
    r = np.einsum("niljk->nlkij", d2gam) - np.einsum("njlik->nlkij", d2gam)
    r += np.einsum("nlim,mjk->nlkij", dgam, gam) + np.einsum("lim,nmjk->nlkij", gam, dgam)
    r -= np.einsum("nljm,mik->nlkij", dgam, gam) + np.einsum("ljm,nmik->nlkij", gam, dgam)
    return r


def riemann(chart: MetricChart, p, cfg: DiffConfig = DEFAULT) -> np.ndarray:
    g, dg, d2g = metric_jet(chart, p, 2, cfg)
    gam, dgam = christoffel_jet(g, dg, d2g)
    return riemann_from(gam, dgam)


def nabla_riemann(chart: MetricChart, p, cfg: DiffConfig = DEFAULT) -> np.ndarray:
    """Covariant derivative of the curvature tensor, ``nr[m, l, k, i, j] = (nabla_m R)^l_kij``."""
    p = np.asarray(p, dtype=float)
    if cfg.analytic and chart.components.exact:
        g, dg, d2g, d3g = metric_jet(chart, p, 3, cfg)
        gam, dgam, d2gam = christoffel_jet(g, dg, d2g, d3g)
        riem = riemann_from(gam, dgam)
        driem = riemann_deriv_from(gam, dgam, d2gam)
    else:
        gam = christoffel(chart, p, cfg)
        riem = riemann(chart, p, cfg)
        chart.check(p, 1.01 * (2 * cfg.h2 + cfg.h))
        driem = gradient_fd(lambda q: riemann(chart, q, cfg), p, cfg.h2, cfg.richardson)
    nr = driem.copy()
    nr += np.einsum("lmp,pkij->mlkij", gam, riem)
    nr -= np.einsum("pmk,lpij->mlkij", gam, riem)
    nr -= np.einsum("pmi,lkpj->mlkij", gam, riem)
    nr -= np.einsum("pmj,lkip->mlkij", gam, riem)
    return nr


def curvature_apply(riem: np.ndarray, X, Y, Z) -> np.ndarray:
    """Coordinate components of R(X, Y)Z."""
    return np.einsum("lkij,i,j,k->l", riem, X, Y, Z)


def brioschi(E, F, G, Eu, Ev, Fu, Fv, Gu, Gv, Evv, Fuv, Guu) -> float:
    """Gaussian curvature of E du^2 + 2F du dv + G dv^2 from its 2-jet."""
    m1 = np.array(
        [
            [-0.5 * Evv + Fuv - 0.5 * Guu, 0.5 * Eu, Fu - 0.5 * Ev],
            [Fv - 0.5 * Gu, E, F],
            [0.5 * Gv, F, G],
        ]
    )
    m2 = np.array([[0.0, 0.5 * Ev, 0.5 * Gu], [0.5 * Ev, E, F], [0.5 * Gu, F, G]])
    return float((np.linalg.det(m1) - np.linalg.det(m2)) / (E * G - F * F) ** 2)


def brioschi_from_jet(g, dg, d2g) -> float:
    return brioschi(
        g[0, 0], g[0, 1], g[1, 1],
        dg[0, 0, 0], dg[1, 0, 0], dg[0, 0, 1], dg[1, 0, 1], dg[0, 1, 1], dg[1, 1, 1],
        d2g[1, 1, 0, 0], d2g[0, 1, 0, 1], d2g[0, 0, 1, 1],
    )  # fmt: skip


def gauss_curvature(chart: MetricChart, p, cfg: DiffConfig = DEFAULT, method: str | None = None) -> float:
    """Gaussian curvature at p.

    ``method`` is ``"semi_geodesic"`` (-f_uu/f), ``"brioschi"`` or
    ``"riemann"``; the default follows the chart kind.
    """
    p = np.asarray(p, dtype=float)
    if method is None:
        method = "semi_geodesic" if chart.kind == "semi_geodesic" else "brioschi"
    if method == "semi_geodesic":
        if chart.f is None:
            raise BadParams("chart has no semi-geodesic f")
        chart.check(p)
        if cfg.analytic and chart.f.exact:
            f = chart.f.value(*p)[0]
            fuu = chart.f.derivative(2, *p)[0, 0, 0]
        else:
            chart.check(p, 1.01 * cfg.h2)
            fn = lambda q: chart.f.value(*q)[0]  # noqa: E731
            f = fn(p)
            fuu = hessian_fd(fn, p, cfg.h2, cfg.richardson)[0, 0]
        return float(-fuu / f)
    if method == "brioschi":
        g, dg, d2g = metric_jet(chart, p, 2, cfg)
        return brioschi_from_jet(g, dg, d2g)
    if method == "riemann":
        g = metric_eval(chart, p)
        riem = riemann(chart, p, cfg)
        # <R(d_u, d_v) d_v, d_u> / det g
        return float(np.einsum("l,l", g[0], riem[:, 1, 0, 1]) / np.linalg.det(g))
    raise BadParams(f"unknown curvature method {method!r}")


# ---------------------------------------------------------------------------
# vector fields and derivatives


class VectorField:
    """Coordinate-component vector field with an optional exact Jacobian.

    ``jacobian(q)`` returns ``jac[i, k] = d_i Y^k`` (derivative axis first).
    """

    def __init__(self, fn: Callable, jacobian: Callable | None = None, name: str = ""):
        self.fn = fn
        self.jacobian = jacobian
        self.name = name

    def __call__(self, q) -> np.ndarray:
        return np.asarray(self.fn(np.asarray(q, dtype=float)), dtype=float)

    @classmethod
    def constant(cls, comps) -> "VectorField":
        c = np.asarray(comps, dtype=float)
        return cls(lambda q: c, lambda q: np.zeros((2, 2)), "constant")


def _as_field(Y) -> VectorField:
    if isinstance(Y, VectorField):
        return Y
    if callable(Y):
        return VectorField(Y)
    return VectorField.constant(as_components(Y))


def covariant_derivative(chart: MetricChart, X, Y, p, cfg: DiffConfig = DEFAULT, gamma=None) -> TangentVector:
    """nabla_X Y at p: X^i (d_i Y^k + Gamma^k_ij Y^j) d_k."""
    p = np.asarray(p, dtype=float)
    x = as_components(X)
    Y = _as_field(Y)
    chart.check(p)
    if gamma is None:
        gamma = christoffel(chart, p, cfg)
    y = Y(p)
    if cfg.analytic and Y.jacobian is not None:
        dy = x @ Y.jacobian(p)
    else:
        chart.check(p, 1.01 * cfg.h * max(1.0, float(np.max(np.abs(x)))))
        dy = directional_derivative(Y, p, x, cfg.h, cfg.richardson)
    return TangentVector.at(p, dy + np.einsum("kij,i,j->k", gamma, x, y))


def scalar_derivative(chart: MetricChart, X, phi: Callable, p, cfg: DiffConfig = DEFAULT) -> float:
    """Directional derivative X(phi) at p by central differences along X."""
    p = np.asarray(p, dtype=float)
    x = as_components(X)
    chart.check(p, 1.01 * cfg.h * max(1.0, float(np.max(np.abs(x)))))
    return float(directional_derivative(lambda q: float(phi(q)), p, x, cfg.h, cfg.richardson))


def inner(g: np.ndarray, a, b) -> float:
    return float(np.asarray(a) @ g @ np.asarray(b))
