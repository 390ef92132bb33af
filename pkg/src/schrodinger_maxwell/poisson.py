"""Newtonian potential of a radial charge density.

For radial u the unique decaying solution of -Delta(phi) = u^2 has the
closed radial form

    phi(r) = (1/r) int_0^r s^2 u(s)^2 ds + int_r^{r_max} s u(s)^2 ds,

which two cumulative trapezoid passes evaluate in O(n).  This is the Green's
function of the radial Laplacian written out, so the computed phi is exactly
consistent with the quadrature used everywhere else, and the induced discrete
bilinear form (u^2, v^2) -> int phi_u v^2 is symmetric to rounding.
phi(0) takes the analytic limit int_0^{r_max} s u(s)^2 ds.
"""

from __future__ import annotations

import numpy as np
from scipy.integrate import cumulative_trapezoid

from .radial import RadialField, RadialGrid, integrate3d

__all__ = ["newtonian_potential", "nonlocal_energy", "potential_of_density"]


def potential_of_density(grid: RadialGrid, density: np.ndarray) -> np.ndarray:
    """Solve -Delta(phi) = density for radial sample arrays.

    Linear in `density` (which may be signed, e.g. the product 2*u*v in a
    directional derivative).  Batched over leading axes.
    """
    r = grid.r
    interior = cumulative_trapezoid(r * r * density, r, axis=-1, initial=0.0)
    exterior = cumulative_trapezoid(r * density, r, axis=-1, initial=0.0)
    exterior = exterior[..., -1:] - exterior
    phi = np.empty_like(interior)
    phi[..., 1:] = interior[..., 1:] / r[1:] + exterior[..., 1:]
    # interior part vanishes like r^3 at the origin; only the exterior
    # integral survives the limit
    phi[..., 0] = exterior[..., 0]
    return phi


def newtonian_potential(u: RadialField) -> RadialField:
    """Potential phi_u solving -Delta(phi) = u^2; nonnegative and nonincreasing."""
    return RadialField(u.grid, potential_of_density(u.grid, u.values**2))


def nonlocal_energy(u: RadialField) -> float:
    """int phi_u u^2 dx  (the Coulomb self-interaction, without coupling factors)."""
    phi = potential_of_density(u.grid, u.values**2)
    return float(integrate3d(RadialField(u.grid, phi * u.values**2)))
