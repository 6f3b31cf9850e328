"""Second fundamental form and curvatures of the hypersurface xi(M) in T1M.

All closed forms consume a :class:`~sasakigeo.frame_fields.FrameData`; the
oracle variants go back to the bundle machinery instead.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import GeometryError
from .frame_fields import CANONICAL, FrameConvention, FrameData, UnitVectorField, frame_data, nabla_xi_coords
from .metric_core import (
    DEFAULT,
    DiffConfig,
    Point2,
    christoffel_jet,
    covariant_derivative,
    curvature_apply,
    inner,
    metric_jet,
    riemann,
)
from .sasaki import BundleVector, coordinate_lift_field, oracle_K_xi, t1m_sectional

VARIANTS = ("form_i", "form_ii", "kowalski_oracle")


@dataclass(frozen=True)
class SecondFundamentalForm:
    om00: float
    om01: float
    om11: float
    variant: str = "form_i"

    @property
    def matrix(self) -> np.ndarray:
        return np.array([[self.om00, self.om01], [self.om01, self.om11]])

    @property
    def det(self) -> float:
        return self.om00 * self.om11 - self.om01**2

    def max_abs(self) -> float:
        return max(abs(self.om00), abs(self.om01), abs(self.om11))

    def diff(self, other: "SecondFundamentalForm") -> float:
        return float(np.max(np.abs(self.matrix - other.matrix)))


def tangent_frame(d: FrameData) -> tuple[BundleVector, BundleVector, BundleVector]:
    """Orthonormal tangent pair and unit normal of xi(M) built from the singular frame."""
    f = d.frame
    c = 1.0 / np.sqrt(1.0 + f.lam**2)
    zero = np.zeros(2)
    t0 = BundleVector(f.p, f.xi, f.e0, zero)
    t1 = BundleVector(f.p, f.xi, c * f.e1, c * f.lam * f.eta)
    n = BundleVector(f.p, f.xi, -c * f.lam * f.e1, c * f.eta)
    return t0, t1, n


def _sign(s: int) -> float:
    """(-1)^(s+1)."""
    return -1.0 if s == 0 else 1.0


def _om01_form_i(d: FrameData) -> float:
    lam = d.lam
    return 0.5 * _sign(d.s) * d.K + d.e0_lam / (1.0 + lam**2)


def closed_form_sff(d: FrameData, variant: str = "form_i") -> SecondFundamentalForm:
    f = d.frame
    lam = f.lam
    q = 1.0 + lam**2
    om00 = -f.mu * lam / np.sqrt(q)
    om11 = d.e1_lam / q**1.5
    if variant == "form_i":
        om01 = _om01_form_i(d)
    elif variant == "form_ii":
        om01 = 0.5 * (f.sigma * lam + (1.0 - lam**2) / q * d.e0_lam)
    else:
        raise ValueError(f"no closed form for variant {variant!r}")
    return SecondFundamentalForm(float(om00), float(om01), float(om11), variant)


def kowalski_sff(fld: UnitVectorField, p, d: FrameData, cfg: DiffConfig = DEFAULT) -> SecondFundamentalForm:
    """Second fundamental form from the Kowalski connection, independent of the closed forms.

    With ``W_j = d xi(d_j) = d_j^h + (Z_j)^v`` and ``Z_j = nabla_{d_j} xi`` both
    extend to lifted fields on TM, so ``nabla~_{W_i} W_j`` is a sum of four
    Kowalski terms; its normal component gives Omega in the coordinate basis.
    """
    p = np.asarray(p, dtype=float)
    chart = fld.chart
    f = d.frame
    xi = f.xi
    riem = riemann(chart, p, cfg)
    Z = nabla_xi_coords(fld, p, cfg)
    lifts = [coordinate_lift_field(fld, j, cfg) for j in range(2)]
    g, dg = metric_jet(chart, p, 1, cfg)
    gamma = christoffel_jet(g, dg)[0]
    E = np.eye(2)
    c = 1.0 / np.sqrt(1.0 + f.lam**2)
    nh, nv = -c * f.lam * f.e1, c * f.eta
    om = np.empty((2, 2))
    for i in range(2):
        for j in range(2):
            h = (
                gamma[:, i, j]
                + 0.5 * curvature_apply(riem, xi, Z[:, i], E[j])
                + 0.5 * curvature_apply(riem, xi, Z[:, j], E[i])
            )
            v = -0.5 * curvature_apply(riem, E[i], E[j], xi) + covariant_derivative(
                chart, E[i], lifts[j], p, cfg, gamma=gamma
            ).components
            om[i, j] = inner(g, h, nh) + inner(g, v, nv)
    om = 0.5 * (om + om.T)
    # tangent frame in coordinates: d xi(a) = t0 for a = e0, d xi(b) = t1 / c for b = e1
    a, b = f.e0, f.e1
    return SecondFundamentalForm(
        float(a @ om @ a), float(c * (a @ om @ b)), float(c * c * (b @ om @ b)), "kowalski_oracle"
    )


def second_fundamental_form(
    fld: UnitVectorField,
    p,
    variant: str = "form_i",
    cfg: DiffConfig = DEFAULT,
    convention: FrameConvention = CANONICAL,
    data: FrameData | None = None,
) -> SecondFundamentalForm:
    d = data if data is not None else frame_data(fld, p, cfg, convention)
    if variant == "kowalski_oracle":
        return kowalski_sff(fld, p, d, cfg)
    return closed_form_sff(d, variant)


def sectional_along_xi_from(d: FrameData) -> float:
    K, lam = d.K, d.lam
    q = 1.0 + lam**2
    return K * K / 4.0 + K * (1.0 - K) / q + _sign(d.s) * lam * d.e0_K / q


def gauss_curvature_xi_from(d: FrameData) -> float:
    lam = d.lam
    q = 1.0 + lam**2
    # e1(1/(1+lam^2)) by the chain rule from e1(lam)
    e1_inv = -2.0 * lam * d.e1_lam / q**2
    return sectional_along_xi_from(d) + 0.5 * d.frame.mu * e1_inv - _om01_form_i(d) ** 2


def sectional_along_xi(fld, p, cfg: DiffConfig = DEFAULT, convention: FrameConvention = CANONICAL) -> float:
    return sectional_along_xi_from(frame_data(fld, p, cfg, convention))


def gauss_curvature_xi(fld, p, cfg: DiffConfig = DEFAULT, convention: FrameConvention = CANONICAL) -> float:
    return gauss_curvature_xi_from(frame_data(fld, p, cfg, convention))


def extrinsic_curvature(fld, p, cfg: DiffConfig = DEFAULT, convention: FrameConvention = CANONICAL) -> float:
    return closed_form_sff(frame_data(fld, p, cfg, convention)).det


def geodesic_field_K_xi(K: float, sigma: float) -> float:
    """Intrinsic curvature of xi(M) for a geodesic field on a constant-curvature surface."""
    return K - ((K + sigma**2) / (1.0 + sigma**2)) ** 2


def direct_sectional(fld, p, d: FrameData, cfg: DiffConfig = DEFAULT, nabla_r: bool = True) -> float:
    """Bundle sectional curvature on the tangent plane of xi(M), from the general formula."""
    t0, t1, _ = tangent_frame(d)
    return t1m_sectional(fld.chart, p, d.frame.xi, t0, t1, cfg, nabla_r)


@dataclass(frozen=True)
class CurvatureReport:
    p: Point2
    K: float
    lam: float
    k: float
    kappa: float
    mu: float
    sigma: float
    s: int
    omega: SecondFundamentalForm
    k_t1m: float
    det_omega: float
    k_xi: float
    k_xi_oracle: float | None
    residuals: dict = field(default_factory=dict)
    degenerate: bool = False

    def as_dict(self) -> dict:
        return {
            "u": self.p.u,
            "v": self.p.v,
            "K": self.K,
            "lambda": self.lam,
            "k": self.k,
            "kappa": self.kappa,
            "mu": self.mu,
            "sigma": self.sigma,
            "s": self.s,
            "om00": self.omega.om00,
            "om01": self.omega.om01,
            "om11": self.omega.om11,
            "k_t1m": self.k_t1m,
            "det_om": self.det_omega,
            "k_xi": self.k_xi,
            "k_xi_oracle": self.k_xi_oracle,
            "degenerate": self.degenerate,
            "residuals": dict(sorted(self.residuals.items())),
        }


def curvature_report(
    fld: UnitVectorField,
    p,
    cfg: DiffConfig = DEFAULT,
    convention: FrameConvention = CANONICAL,
    oracles: bool = True,
) -> CurvatureReport:
    """Every closed-form quantity at p together with its consistency residuals.

    With ``oracles=False`` only the closed forms and the algebraic checks are
    evaluated (no Kowalski, pullback or direct-sectional oracles).
    """
    p = np.asarray(p, dtype=float)
    d = frame_data(fld, p, cfg, convention)
    f = d.frame
    om_i = closed_form_sff(d, "form_i")
    om_ii = closed_form_sff(d, "form_ii")
    k_t1m = sectional_along_xi_from(d)
    det = om_i.det
    k_xi = gauss_curvature_xi_from(d)
    res = {
        "forms": om_i.diff(om_ii),
        "gauss_identity": abs(k_xi - (k_t1m + det)),
        "lambda_norm": abs(f.lam**2 - f.k**2 - f.kappa**2),
        "frame_gauss": abs((-1) ** f.s * d.K - d.e0_lam + f.lam * f.sigma),
    }
    k_or = None
    if oracles:
        k_or = oracle_K_xi(fld, p, cfg)
        res["oracle"] = abs(k_xi - k_or)
        ko = kowalski_sff(fld, p, d, cfg)
        res["kowalski"] = om_i.diff(ko)
        res["kowalski_ii"] = om_ii.diff(ko)
        res["sec_direct"] = abs(k_t1m - direct_sectional(fld, p, d, cfg))
    return CurvatureReport(
        p=Point2(float(p[0]), float(p[1])), K=d.K, lam=f.lam, k=f.k, kappa=f.kappa, mu=f.mu, sigma=f.sigma,
        s=f.s, omega=om_i, k_t1m=k_t1m, det_omega=det, k_xi=k_xi, k_xi_oracle=k_or, residuals=res,
        degenerate=f.degenerate,
    )  # fmt: skip


def is_totally_geodesic(
    fld: UnitVectorField, points, tol: float = 1e-8, cfg: DiffConfig = DEFAULT
) -> tuple[bool, float]:
    """Whether every entry of Omega stays below tol on the given points; also the max entry."""
    worst = 0.0
    for q in points:
        try:
            worst = max(worst, second_fundamental_form(fld, q, "form_i", cfg).max_abs())
        except GeometryError as exc:
            raise GeometryError(f"at point {tuple(map(float, q))}: {exc}") from exc
    return worst < tol, worst
