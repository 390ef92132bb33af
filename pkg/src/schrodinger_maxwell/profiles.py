"""Source-term families and field generators.

The source g must be nonnegative, radial, not identically zero, and small in
L^2; the two families here (g ~ exp(-r) and g ~ exp(-r^2)) are smooth with
r g'(r) square integrable, and are rescaled so |g|_2 hits a requested target
exactly in the grid quadrature.

Random smooth fields are mixtures of centered Gaussians, i.e. smooth even
functions of r; radial H^1 candidates have vanishing slope at the origin, and
the generators respect that.
"""

from __future__ import annotations

import numpy as np

from .radial import RadialField, RadialGrid, lp_norm

__all__ = ["make_source", "random_smooth_field", "exp_profile", "gaussian_profile"]

G_FAMILIES = ("exponential", "gaussian")


def exp_profile(grid: RadialGrid, rate: float = 1.0) -> RadialField:
    return RadialField(grid, np.exp(-rate * grid.r))


def gaussian_profile(grid: RadialGrid, rate: float = 1.0) -> RadialField:
    return RadialField(grid, np.exp(-rate * grid.r**2))


def make_source(grid: RadialGrid, family: str, g_l2: float) -> RadialField:
    """Member of the named family rescaled so lp_norm(g, 2) == g_l2."""
    if family == "exponential":
        base = exp_profile(grid)
    elif family == "gaussian":
        base = gaussian_profile(grid)
    else:
        raise ValueError(f"unknown source family {family!r}; pick from {G_FAMILIES}")
    if g_l2 < 0:
        raise ValueError(f"target |g|_2 must be >= 0, got {g_l2}")
    if g_l2 == 0.0:
        return RadialField.zeros(grid)
    return RadialField(grid, base.values * (g_l2 / lp_norm(base, 2)))


def random_smooth_field(
    grid: RadialGrid,
    rng: np.random.Generator,
    n_bumps: int = 4,
    amplitude: float = 1.0,
) -> RadialField:
    """Random smooth radial field: a signed mixture of centered Gaussians
    (optionally modulated by r^2), vanishing at r_max."""
    r = grid.r
    vals = np.zeros_like(r)
    for _ in range(n_bumps):
        a = rng.uniform(-amplitude, amplitude)
        b = rng.uniform(0.08, 1.5)
        if rng.uniform() < 0.4:
            vals += a * r**2 * b * np.exp(-b * r**2)
        else:
            vals += a * np.exp(-b * r**2)
    vals[-1] = 0.0
    return RadialField(grid, vals)
