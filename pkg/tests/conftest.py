import numpy as np
import pytest

from schrodinger_maxwell import (
    Problem,
    SolverConfig,
    geometry_constants,
    lp_norm,
    make_grid,
    make_source,
    sobolev_constant,
    solve_two_solutions,
)


def reference_setup(p, lam, n=1024, r_max=20.0, g_fraction=0.5, family="exponential"):
    """Problem with |g|_2 at the requested fraction of C_p, plus its geometry."""
    grid = make_grid(r_max, n)
    s = sobolev_constant(p, grid)
    c_p = geometry_constants(p, s, 0.0).c_p
    g = make_source(grid, family, g_fraction * c_p)
    geo = geometry_constants(p, s, lp_norm(g, 2))
    return Problem(lam=lam, p=p, g=g), geo


@pytest.fixture(scope="session")
def p3_small():
    """p = 3, lam = 1 reference problem on a quick grid."""
    return reference_setup(3.0, 1.0, n=1024)


@pytest.fixture(scope="session")
def p3_small_solution(p3_small):
    prob, geo = p3_small
    return solve_two_solutions(prob, SolverConfig(), geo=geo)


@pytest.fixture(scope="session")
def p2_small():
    """p = 2, small coupling, cut-off route, quick grid."""
    return reference_setup(2.0, 1e-3, n=1024)


@pytest.fixture(scope="session")
def p2_small_solution(p2_small):
    prob, geo = p2_small
    return solve_two_solutions(prob, SolverConfig(), geo=geo)
