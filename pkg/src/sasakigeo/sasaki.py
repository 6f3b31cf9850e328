"""Sasaki geometry of the unit tangent bundle, with lifts kept extrinsic.

A bundle vector at ``(p, xi)`` is a pair ``(X1, X2)`` of surface vectors
standing for ``X1^h + X2^v``; it is tangent to T1M iff ``<X2, xi> = 0``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BasePointMismatch, NonOrthonormalInput
from .frame_fields import UnitVectorField, nabla_xi_coords
from .metric_core import (
    DEFAULT,
    DiffConfig,
    MetricChart,
    VectorField,
    as_components,
    brioschi_from_jet,
    covariant_derivative,
    curvature_apply,
    gradient_fd,
    hessian_fd,
    inner,
    metric_eval,
    nabla_riemann,
    riemann,
)

ORTHONORMAL_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class BundleVector:
    """``h^h + v^v`` at the bundle point ``(p, xi)``; all parts in coordinate components."""

    p: np.ndarray
    xi: np.ndarray
    h: np.ndarray
    v: np.ndarray

    @classmethod
    def make(cls, p, xi, h, v) -> "BundleVector":
        return cls(*(as_components(x) for x in (p, xi, h, v)))

    def _same_base(self, other: "BundleVector") -> None:
        if not (np.allclose(self.p, other.p, rtol=0, atol=1e-12) and np.allclose(self.xi, other.xi, rtol=0, atol=1e-12)):
            raise BasePointMismatch(f"bundle points {tuple(self.p)} and {tuple(other.p)} differ")

    def __add__(self, other: "BundleVector") -> "BundleVector":
        self._same_base(other)
        return BundleVector(self.p, self.xi, self.h + other.h, self.v + other.v)

    def __sub__(self, other: "BundleVector") -> "BundleVector":
        return self + (-1.0) * other

    def __rmul__(self, c: float) -> "BundleVector":
        return BundleVector(self.p, self.xi, c * self.h, c * self.v)

    def __truediv__(self, c: float) -> "BundleVector":
        return (1.0 / c) * self

    def vertical_defect(self, g) -> float:
        """<X2, xi>: zero exactly when the vector is tangent to T1M."""
        return inner(g, self.v, self.xi)


def horizontal(p, xi, X) -> BundleVector:
    return BundleVector.make(p, xi, X, np.zeros(2))


def vertical(p, xi, X) -> BundleVector:
    return BundleVector.make(p, xi, np.zeros(2), X)


def sasaki_inner(chart: MetricChart, A: BundleVector, B: BundleVector) -> float:
    A._same_base(B)
    g = metric_eval(chart, A.p)
    return inner(g, A.h, B.h) + inner(g, A.v, B.v)


def kowalski_derivative(
    chart: MetricChart, kind_x: str, kind_y: str, X, Y, p, xi, cfg: DiffConfig = DEFAULT, riem=None
) -> BundleVector:
    """Levi-Civita derivative of the lift of field Y along the lift of X at ``(p, xi)``.

    ``kind_x``/``kind_y`` are ``"h"`` or ``"v"``; ``X`` is a vector at p and
    ``Y`` a :class:`VectorField` (or anything ``covariant_derivative`` accepts).
    """
    p = np.asarray(p, dtype=float)
    xi = as_components(xi)
    x = as_components(X)
    if kind_x not in ("h", "v") or kind_y not in ("h", "v"):
        raise ValueError(f"lift kinds must be 'h' or 'v', got {kind_x!r}, {kind_y!r}")
    chart.check(p)
    zero = np.zeros(2)
    if kind_x == "v" and kind_y == "v":
        return BundleVector(p, xi, zero, zero)
    if riem is None:
        riem = riemann(chart, p, cfg)
    if kind_x == "v":
        y = Y(p) if callable(Y) else as_components(Y)
        return BundleVector(p, xi, 0.5 * curvature_apply(riem, xi, x, y), zero)
    y = Y(p) if callable(Y) else as_components(Y)
    nxy = covariant_derivative(chart, x, Y, p, cfg).components
    if kind_y == "h":
        return BundleVector(p, xi, nxy, -0.5 * curvature_apply(riem, x, y, xi))
    return BundleVector(p, xi, 0.5 * curvature_apply(riem, xi, y, x), nxy)


def t1m_sectional(
    chart: MetricChart, p, xi, A: BundleVector, B: BundleVector, cfg: DiffConfig = DEFAULT, nabla_r: bool = True
) -> float:
    """Sectional curvature of T1M on the plane spanned by orthonormal tangent vectors A, B.

    ``nabla_r=False`` drops the two covariant-derivative-of-R terms, which
    vanish on constant-curvature charts.
    """
    p = np.asarray(p, dtype=float)
    xi = as_components(xi)
    g = metric_eval(chart, p)
    A._same_base(B)
    gram = np.array([[sasaki_inner(chart, a, b) for b in (A, B)] for a in (A, B)])
    if np.max(np.abs(gram - np.eye(2))) > ORTHONORMAL_TOL:
        raise NonOrthonormalInput(f"Gram matrix {gram.tolist()} is not the identity")
    if max(abs(A.vertical_defect(g)), abs(B.vertical_defect(g))) > ORTHONORMAL_TOL:
        raise NonOrthonormalInput("vertical parts must be orthogonal to xi")
    X1, X2, Y1, Y2 = A.h, A.v, B.h, B.v
    R = riemann(chart, p, cfg)

    def r(a, b, c):
        return curvature_apply(R, a, b, c)

    def ip(a, b):
        return inner(g, a, b)

    rxy_xi = r(X1, Y1, xi)
    mix = r(xi, Y2, X1) + r(xi, X2, Y1)
    out = (
        ip(r(X1, Y1, Y1), X1)
        - 0.75 * ip(rxy_xi, rxy_xi)
        + 0.25 * ip(mix, mix)
        + ip(X2, X2) * ip(Y2, Y2)
        - ip(X2, Y2) ** 2
        + 3.0 * ip(r(X1, Y1, Y2), X2)
        - ip(r(xi, X2, X1), r(xi, Y2, Y1))
    )
    if nabla_r:
        nr = nabla_riemann(chart, p, cfg)
        # (nabla_Z R)(a, b)c = Z^m nr[m, l, k, i, j] a^i b^j c^k
        t1 = np.einsum("m,mlkij,i,j,k->l", X1, nr, xi, Y2, Y1)
        t2 = np.einsum("m,mlkij,i,j,k->l", Y1, nr, xi, X2, X1)
        out += ip(t1, X1) + ip(t2, Y1)
    return float(out)


def pushforward(fld: UnitVectorField, p, X, cfg: DiffConfig = DEFAULT) -> BundleVector:
    """d xi (X) = X^h + (nabla_X xi)^v."""
    p = np.asarray(p, dtype=float)
    x = as_components(X)
    D = nabla_xi_coords(fld, p, cfg)
    return BundleVector(p, fld.xi(p), x, D @ x)


def induced_metric(fld: UnitVectorField, p, cfg: DiffConfig = DEFAULT) -> np.ndarray:
    """Pullback of the Sasaki metric by xi in chart coordinates."""
    p = np.asarray(p, dtype=float)
    g = metric_eval(fld.chart, p)
    D = nabla_xi_coords(fld, p, cfg)
    G = g + D.T @ g @ D
    return 0.5 * (G + G.T)


def oracle_K_xi(fld: UnitVectorField, p, cfg: DiffConfig = DEFAULT) -> float:
    """Gaussian curvature of the pullback metric from differenced values of it."""
    p = np.asarray(p, dtype=float)
    fld.chart.check(p, 1.01 * (cfg.h + 1.5 * cfg.h2))
    G = lambda q: induced_metric(fld, q, cfg)  # noqa: E731
    dG = gradient_fd(G, p, cfg.h, cfg.richardson)
    d2G = hessian_fd(G, p, cfg.h2, cfg.richardson)
    return brioschi_from_jet(G(p), dG, d2G)


def coordinate_lift_field(fld: UnitVectorField, j: int, cfg: DiffConfig = DEFAULT) -> VectorField:
    """The surface field ``nabla_{d_j} xi``, vertical part of ``d xi(d_j)``."""
    return VectorField(lambda q: nabla_xi_coords(fld, q, cfg)[:, j], None, f"nabla_{j} xi")
