import os

import numpy as np
import pytest
import sympy as sp
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow], derandomize=True
)
settings.register_profile("thorough", max_examples=400, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

U, V = sp.symbols("u v", real=True)


def sympy_christoffel(g11, g12, g22):
    """Levi-Civita symbols Gamma[k, i, j] of a 2x2 metric, as sympy expressions."""
    g = sp.Matrix([[g11, g12], [g12, g22]])
    gi = g.inv()
    x = (U, V)
    out = [[[None] * 2 for _ in range(2)] for _ in range(2)]
    for k in range(2):
        for i in range(2):
            for j in range(2):
                out[k][i][j] = sp.simplify(
                    sum(gi[k, l] * (sp.diff(g[l, i], x[j]) + sp.diff(g[l, j], x[i]) - sp.diff(g[i, j], x[l])) for l in range(2))
                    / 2
                )
    return out


def sympy_gauss(g11, g12, g22):
    """Gaussian curvature from the Riemann tensor of a 2x2 metric."""
    gam = sympy_christoffel(g11, g12, g22)
    x = (U, V)
    # R^k_{lij} = d_i Gam^k_{jl} - d_j Gam^k_{il} + Gam^k_{im} Gam^m_{jl} - Gam^k_{jm} Gam^m_{il}
    g = sp.Matrix([[g11, g12], [g12, g22]])
    R0 = [
        sp.diff(gam[k][1][1], x[0]) - sp.diff(gam[k][0][1], x[1])
        + sum(gam[k][0][m] * gam[m][1][1] - gam[k][1][m] * gam[m][0][1] for m in range(2))
        for k in range(2)
    ]  # R^k_{1 0 1}: R(d_u, d_v) d_v
    r = sum(g[0, k] * R0[k] for k in range(2))
    return r / g.det()


def numeric(expr):
    return sp.lambdify((U, V), expr, "numpy")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


_ACCEPTANCE = pytest.StashKey[list]()


@pytest.fixture(scope="session")
def acceptance_log(request):
    """Lines collected by the acceptance tests and echoed in the terminal summary."""
    return request.config.stash.setdefault(_ACCEPTANCE, [])


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(_ACCEPTANCE, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
        failed = sum(line.startswith("FAIL") for line in lines)
        terminalreporter.write_line(f"{len(lines) - failed}/{len(lines)} criteria passed")
