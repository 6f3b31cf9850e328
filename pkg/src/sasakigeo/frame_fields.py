"""Unit vector fields, the operator X -> nabla_X xi and its singular frame.

A field is an angle function ``omega(u, v)`` against the chart's orthonormal
frame, ``xi = cos(omega) X1 + sin(omega) X2``. Since nabla_X xi is orthogonal to
xi, in two dimensions the operator factors as ``A = eta0 w^T`` with
``eta0 = J xi``; the singular frame is read off the covector ``w``.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np
import sympy as sp

from .errors import DegenerateOperator
from .expr import parse_expr
from .metric_core import (
    DEFAULT,
    J,
    DiffConfig,
    MetricChart,
    VectorField,
    christoffel_jet,
    covariant_derivative,
    directional_derivative,
    frame_jet,
    gauss_curvature,
    inner,
    metric_jet,
    scalar_derivative,
)
from .smooth import Smooth


@dataclass(frozen=True, eq=False)
class UnitVectorField:
    chart: MetricChart
    omega: Smooth
    name: str = ""
    meta: dict = field(default_factory=dict)

    @classmethod
    def from_expr(cls, chart: MetricChart, omega, name: str = "", **meta) -> "UnitVectorField":
        if isinstance(omega, str):
            omega = parse_expr(omega)
        return cls(chart, Smooth.from_exprs([sp.sympify(omega)]), name or str(omega), dict(meta))

    def angle(self, q) -> float:
        return float(self.omega.value(float(q[0]), float(q[1]))[0])

    def _local(self, q, with_jac: bool):
        q = np.asarray(q, dtype=float)
        jet = metric_jet(self.chart, q, 1 if with_jac else 0)
        F, dF = frame_jet(*jet)
        w = self.angle(q)
        return q, F, dF, np.array([np.cos(w), np.sin(w)])

    def xi(self, q) -> np.ndarray:
        _, F, _, cs = self._local(q, False)
        return F @ cs

    def eta0(self, q) -> np.ndarray:
        """J xi: the unit normal making (xi, eta0) positively oriented."""
        _, F, _, cs = self._local(q, False)
        return F @ (J @ cs)

    def _jacobian(self, q, rotate: bool) -> np.ndarray:
        q, F, dF, cs = self._local(q, True)
        dw = self.omega.derivative(1, *q)[0]
        base = J @ cs if rotate else cs
        turned = J @ base
        # d_i (F b) = dF[i] b + F (J b) d_i omega
        return np.stack([dF[i] @ base + (F @ turned) * dw[i] for i in range(2)])

    def xi_field(self) -> VectorField:
        jac = (lambda q: self._jacobian(q, False)) if self.exact else None
        return VectorField(self.xi, jac, "xi")

    def eta0_field(self) -> VectorField:
        jac = (lambda q: self._jacobian(q, True)) if self.exact else None
        return VectorField(self.eta0, jac, "eta")

    @property
    def exact(self) -> bool:
        return self.omega.exact and self.chart.components.exact

    def __repr__(self):
        return f"UnitVectorField({self.name!r} on {self.chart.name!r})"


@dataclass(frozen=True)
class FrameConvention:
    """Sign choices left open by the singular-frame definition.

    The default takes eta = J xi and the nonnegative singular value; each flip
    negates the named vector (and lambda where the defining relation demands).
    """

    flip_eta: bool = False
    flip_e0: bool = False
    flip_e1: bool = False


CANONICAL = FrameConvention()


@dataclass(frozen=True)
class SingularFrame:
    """Singular frame at one point; vectors are coordinate components."""

    p: np.ndarray
    xi: np.ndarray
    eta: np.ndarray
    e0: np.ndarray
    e1: np.ndarray
    lam: float
    s: int
    degenerate: bool = False
    k: float | None = None
    kappa: float | None = None
    mu: float | None = None
    sigma: float | None = None


def _nabla_xi_coords(fld: UnitVectorField, p, cfg: DiffConfig):
    """(D, g, F, gamma) with D[k, j] = (nabla_{d_j} xi)^k."""
    p = np.asarray(p, dtype=float)
    g, dg = metric_jet(fld.chart, p, 1, cfg)
    gamma = christoffel_jet(g, dg)[0]
    F, dF = frame_jet(g, dg)
    cs = np.array([np.cos(fld.angle(p)), np.sin(fld.angle(p))])
    xi = F @ cs
    if cfg.analytic and fld.exact:
        dw = fld.omega.derivative(1, *p)[0]
        dxi = np.stack([dF[i] @ cs + (F @ (J @ cs)) * dw[i] for i in range(2)])
    else:
        fld.chart.check(p, 1.01 * cfg.h)
        dxi = np.stack([directional_derivative(fld.xi, p, e, cfg.h, cfg.richardson) for e in np.eye(2)])
    D = dxi.T + np.einsum("kji,i->kj", gamma, xi)
    return D, g, F, gamma


def nabla_xi_coords(fld: UnitVectorField, p, cfg: DiffConfig = DEFAULT) -> np.ndarray:
    """Coordinate matrix whose j-th column is nabla_{d_j} xi."""
    return _nabla_xi_coords(fld, p, cfg)[0]


def nabla_xi(fld: UnitVectorField, p, cfg: DiffConfig = DEFAULT) -> np.ndarray:
    """Matrix of nabla xi in the chart orthonormal frame (columns nabla_{X1} xi, nabla_{X2} xi)."""
    D, _, F, _ = _nabla_xi_coords(fld, p, cfg)
    return np.linalg.solve(F, D @ F)


def singular_frame(
    fld: UnitVectorField, p, cfg: DiffConfig = DEFAULT, convention: FrameConvention = CANONICAL
) -> SingularFrame:
    p = np.asarray(p, dtype=float)
    D, _, F, _ = _nabla_xi_coords(fld, p, cfg)
    A = np.linalg.solve(F, D @ F)
    w_ang = fld.angle(p)
    xi_f = np.array([np.cos(w_ang), np.sin(w_ang)])
    eta_f = J @ xi_f
    w = A.T @ eta_f
    lam = float(np.hypot(*w))
    degenerate = lam < cfg.degenerate_tol
    if degenerate:
        lam = 0.0
        e1_f = np.array([0.0, 1.0])
    else:
        e1_f = w / lam
    e0_f = -J @ e1_f
    if convention.flip_eta:
        eta_f, lam = -eta_f, -lam
    if convention.flip_e1:
        e1_f, lam = -e1_f, -lam
    if convention.flip_e0:
        e0_f = -e0_f
    same = np.linalg.det(np.column_stack([xi_f, eta_f])) * np.linalg.det(np.column_stack([e0_f, e1_f])) > 0
    return SingularFrame(
        p=p, xi=F @ xi_f, eta=F @ eta_f, e0=F @ e0_f, e1=F @ e1_f,
        lam=lam, s=1 if same else 0, degenerate=bool(degenerate),
    )  # fmt: skip


def lambda_function(fld, cfg: DiffConfig = DEFAULT, convention: FrameConvention = CANONICAL):
    return lambda q: singular_frame(fld, q, cfg, convention).lam


def frame_vector_field(fld, which: str, cfg: DiffConfig = DEFAULT, convention=CANONICAL) -> VectorField:
    return VectorField(lambda q: getattr(singular_frame(fld, q, cfg, convention), which), None, which)


def vanishes_nearby(fld, p, cfg: DiffConfig = DEFAULT) -> bool:
    """True when the operator is (numerically) zero at p and at its h-neighbours."""
    p = np.asarray(p, dtype=float)
    offsets = [np.zeros(2), *(s * cfg.h * e for e in np.eye(2) for s in (1.0, -1.0))]
    fld.chart.check(p, 1.01 * cfg.h)
    return all(singular_frame(fld, p + d, cfg).degenerate for d in offsets)


def _chart_frame_field(chart: MetricChart, col: int, sign: float) -> VectorField:
    def fn(q):
        jet = metric_jet(chart, q, 0)
        return sign * frame_jet(jet[0])[0][:, col]

    def jac(q):
        g, dg = metric_jet(chart, q, 1)
        return sign * frame_jet(g, dg)[1][:, :, col]

    return VectorField(fn, jac if chart.components.exact else None, f"X{col + 1}")


def frame_curvatures(
    fld: UnitVectorField, p, cfg: DiffConfig = DEFAULT, convention: FrameConvention = CANONICAL,
    frame: SingularFrame | None = None,
) -> tuple[float, float, float, float]:
    """Signed geodesic curvatures (k, kappa, mu, sigma) of the xi-, eta-, e0- and e1-curves."""
    p = np.asarray(p, dtype=float)
    chart = fld.chart
    if frame is None:
        frame = singular_frame(fld, p, cfg, convention)
    g, dg = metric_jet(chart, p, 1, cfg)
    gamma = christoffel_jet(g, dg)[0]
    eta_sign = -1.0 if convention.flip_eta else 1.0
    xi_f = fld.xi_field()
    eta0 = fld.eta0_field()
    eta_f = VectorField(lambda q: eta_sign * eta0(q), (lambda q: eta_sign * eta0.jacobian(q)) if eta0.jacobian else None)
    if frame.degenerate:
        if not vanishes_nearby(fld, p, cfg):
            raise DegenerateOperator(f"nabla xi vanishes at the isolated point {tuple(float(x) for x in p)}")
        e0_f = _chart_frame_field(chart, 0, -1.0 if convention.flip_e0 else 1.0)
        e1_f = _chart_frame_field(chart, 1, -1.0 if convention.flip_e1 else 1.0)
    else:
        e0_f = frame_vector_field(fld, "e0", cfg, convention)
        e1_f = frame_vector_field(fld, "e1", cfg, convention)

    def cd(x, Y):
        return covariant_derivative(chart, x, Y, p, cfg, gamma=gamma).components

    k = inner(g, cd(frame.xi, xi_f), frame.eta)
    kappa = inner(g, cd(frame.eta, eta_f), frame.xi)
    mu = inner(g, cd(frame.e0, e0_f), frame.e1)
    sigma = inner(g, cd(frame.e1, e1_f), frame.e0)
    return k, kappa, mu, sigma


@dataclass(frozen=True)
class FrameData:
    """Everything the closed-form curvature formulas consume at one point."""

    frame: SingularFrame
    K: float
    e0_lam: float
    e1_lam: float
    e0_K: float
    lam_zero_nearby: bool = False

    @property
    def lam(self):
        return self.frame.lam

    @property
    def s(self):
        return self.frame.s


def frame_data(
    fld: UnitVectorField, p, cfg: DiffConfig = DEFAULT, convention: FrameConvention = CANONICAL
) -> FrameData:
    p = np.asarray(p, dtype=float)
    chart = fld.chart
    frame = singular_frame(fld, p, cfg, convention)
    k, kappa, mu, sigma = frame_curvatures(fld, p, cfg, convention, frame)
    frame = replace(frame, k=k, kappa=kappa, mu=mu, sigma=sigma)
    K = gauss_curvature(chart, p, cfg)
    e0_K = scalar_derivative(chart, frame.e0, lambda q: gauss_curvature(chart, q, cfg), p, cfg)
    if frame.degenerate:
        # frame_curvatures already established lambda == 0 on a neighbourhood
        return FrameData(frame, K, 0.0, 0.0, e0_K, True)
    lam_fn = lambda_function(fld, cfg, convention)
    e0_lam = scalar_derivative(chart, frame.e0, lam_fn, p, cfg)
    e1_lam = scalar_derivative(chart, frame.e1, lam_fn, p, cfg)
    return FrameData(frame, K, e0_lam, e1_lam, e0_K)


def check_frame_identities(
    fld: UnitVectorField, p, cfg: DiffConfig = DEFAULT, convention: FrameConvention = CANONICAL,
    data: FrameData | None = None,
) -> tuple[float, float]:
    """Residuals of lambda^2 = k^2 + kappa^2 and (-1)^s K = e0(lambda) - lambda sigma."""
    d = data if data is not None else frame_data(fld, p, cfg, convention)
    f = d.frame
    res_a = abs(f.lam**2 - f.k**2 - f.kappa**2)
    res_b = abs((-1) ** f.s * d.K - d.e0_lam + f.lam * f.sigma)
    return res_a, res_b
