"""Discrete operators shared by the functionals and the solvers.

Everything is expressed against the quadrature weights W of integrate3d, so
that dual vectors (partial derivatives of discrete energies with respect to
node values) and strong-form residual fields are related by grad = dual / W.
The node at r = 0 carries zero quadrature weight and enters no stencil of the
discrete energy; solvers treat it as a slaved cosmetic value.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np
from scipy.linalg import cho_solve_banded, cholesky_banded

from .radial import RadialGrid, _cell_weights, cell_diff, cell_diff_transpose

__all__ = ["apply_h1_dual", "residual_norm", "SobolevPreconditioner"]


def apply_h1_dual(grid: RadialGrid, values: np.ndarray) -> np.ndarray:
    """Exact derivative of u -> 0.5 * h1_norm_sq(u): the vector A u with
    A = C^T V C + diag(W), where C is the cell-difference stencil."""
    v = _cell_weights(grid.r_max, grid.n)
    return cell_diff_transpose(v * cell_diff(values, grid.h), grid.h) + (
        grid.weights * values
    )


def residual_norm(grid: RadialGrid, dual: np.ndarray) -> float:
    """L^2 norm of the residual field dual / W (node 0 has weight 0)."""
    w = grid.weights
    return float(np.sqrt(np.sum(dual[1:] ** 2 / w[1:])))


@lru_cache(maxsize=32)
def _banded_cholesky(r_max: float, n: int):
    """Upper-banded Cholesky factor of the discrete (-Delta + 1) operator
    A = C^T V C + diag(W), with an identity row at the weightless origin
    node.  The last node is free (natural boundary: solutions decay to the
    truncation scale rather than being pinned, so the boundary residual can
    actually vanish).  A is the exact Hessian of 0.5 * h1_norm_sq, which
    makes it the natural Sobolev preconditioner."""
    grid = RadialGrid(r_max, n)
    h = grid.h
    w = grid.weights
    v = _cell_weights(r_max, n)
    diag = w.copy()
    upper = np.zeros(n - 1)  # coupling (j, j+1)
    # cells 1..n-2: flux v_i/h^2 between nodes i and i+1
    flux = v[1:] / h**2
    diag[1:-1] += flux
    diag[2:] += flux
    upper[1:] -= flux
    # first cell: d = (u_2 - u_1)/(3h) couples nodes 1 and 2
    c0 = v[0] / (3.0 * h) ** 2
    diag[1] += c0
    diag[2] += c0
    upper[1] -= c0
    # weightless origin node
    diag[0] = 1.0
    upper[0] = 0.0
    ab = np.zeros((2, n))
    ab[0, 1:] = upper
    ab[1, :] = diag
    return cholesky_banded(ab)


class SobolevPreconditioner:
    """Solve A d = dual for descent directions; the banded factorization is
    cached per grid.  The origin row is an identity, so that component
    passes through (callers zero it in the rhs)."""

    def __init__(self, grid: RadialGrid):
        self.grid = grid
        self._chol = _banded_cholesky(grid.r_max, grid.n)

    def solve(self, dual: np.ndarray) -> np.ndarray:
        rhs = dual.copy()
        rhs[0] = 0.0
        return cho_solve_banded((self._chol, False), rhs)
