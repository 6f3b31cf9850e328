"""Smooth functions of (u, v) that carry exact derivatives up to third order.

A :class:`Template` compiles a list of sympy expressions (plus free parameter
symbols) once; :meth:`Template.bind` fixes parameter values and returns a
cheap :class:`Smooth` evaluator. Families of random charts or fields share a
single compiled template.
"""

from __future__ import annotations

import itertools
from functools import lru_cache

import numpy as np
import sympy as sp

from .expr import U, V

MAX_ORDER = 3
# Canonical (sorted) multi-indices per order; 0 stands for u, 1 for v.
_MULTI = {n: list(itertools.combinations_with_replacement((0, 1), n)) for n in range(MAX_ORDER + 1)}
# For each full index tuple (row-major over (2,)*n) the position of its sorted form in _MULTI[n].
_GATHER = {
    n: np.array([_MULTI[n].index(tuple(sorted(idx))) for idx in itertools.product((0, 1), repeat=n)])
    for n in range(MAX_ORDER + 1)
}


class Template:
    def __init__(self, exprs, params=()):
        self.exprs = [sp.sympify(e) for e in exprs]
        self.params = tuple(params)
        self.ncomp = len(self.exprs)
        self._compiled: dict[int, object] = {}

    def _order_fn(self, n: int):
        fn = self._compiled.get(n)
        if fn is None:
            out = []
            for e in self.exprs:
                for idx in _MULTI[n]:
                    d = e
                    for k in idx:
                        d = sp.diff(d, U if k == 0 else V)
                    out.append(d)
            fn = sp.lambdify((U, V, *self.params), out, modules="numpy", cse=True)
            self._compiled[n] = fn
        return fn

    def derivative(self, n: int, u: float, v: float, args: tuple) -> np.ndarray:
        """All n-th partials, shape ``(ncomp,) + (2,)*n``, symmetric in the last n axes."""
        flat = np.asarray(self._order_fn(n)(u, v, *args), dtype=float).reshape(self.ncomp, len(_MULTI[n]))
        if n == 0:
            return flat[:, 0]
        return flat[:, _GATHER[n]].reshape((self.ncomp,) + (2,) * n)

    def bind(self, **values) -> "Smooth":
        missing = [p.name for p in self.params if p.name not in values]
        if missing:
            raise TypeError(f"missing template parameters: {missing}")
        return Smooth(self, tuple(float(values[p.name]) for p in self.params))


@lru_cache(maxsize=256)
def _cached_template(exprs: tuple) -> Template:
    return Template(list(exprs))


def template_for(exprs) -> Template:
    """Parameter-free template, cached on the (hashable) expressions."""
    return _cached_template(tuple(sp.sympify(e) for e in exprs))


class Smooth:
    """Vector of smooth component functions with exact derivatives.

    Plain Python callables can be wrapped with :meth:`from_callable`; those
    have ``exact = False`` and callers fall back to finite differences.
    """

    def __init__(self, template: Template | None, args: tuple = (), fn=None, ncomp: int | None = None):
        self.template = template
        self.args = args
        self._fn = fn
        self.ncomp = template.ncomp if template is not None else int(ncomp)

    @classmethod
    def from_exprs(cls, exprs) -> "Smooth":
        exprs = [sp.sympify(e) for e in exprs]
        free = set().union(*(e.free_symbols for e in exprs)) - {U, V}
        if free:
            raise ValueError(f"unbound symbols {sorted(map(str, free))}")
        return cls(template_for(exprs))

    @classmethod
    def from_callable(cls, fn, ncomp: int) -> "Smooth":
        return cls(None, fn=fn, ncomp=ncomp)

    @property
    def exact(self) -> bool:
        return self.template is not None

    @property
    def exprs(self):
        if self.template is None:
            return None
        subs = dict(zip(self.template.params, self.args))
        return [e.subs(subs) for e in self.template.exprs]

    def value(self, u: float, v: float) -> np.ndarray:
        if self.template is None:
            return np.asarray(self._fn(u, v), dtype=float).reshape(self.ncomp)
        return self.template.derivative(0, u, v, self.args)

    def derivative(self, n: int, u: float, v: float) -> np.ndarray:
        if self.template is None:
            raise TypeError("callable-backed function has no exact derivatives")
        return self.template.derivative(n, u, v, self.args)
