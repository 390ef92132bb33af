"""Self-contained invariant suite for the verify mode.

A condensed version of the property checks that the test suite runs at full
scale: quadrature convergence, Poisson closed forms and kernel symmetry,
gradient consistency of the three functionals, the universal inequalities
(Ruiz gap and the mountain-ring lower bound), identity cross-checks, and the
cut-off profile constraints.  Each check returns (name, passed, detail).
"""

from __future__ import annotations

import numpy as np

from .energy import (
    CutoffSpec,
    Problem,
    cutoff_eta,
    cutoff_eta_prime,
    energy,
    energy_cutoff,
    energy_mu,
    geometry_constants,
    gradient,
    gradient_cutoff,
    sobolev_constant,
)
from .diagnostics import decomposition_check, nehari_residual, ruiz_gap
from .poisson import newtonian_potential, nonlocal_energy
from .profiles import make_source, random_smooth_field
from .radial import (
    RadialField,
    h1_norm_sq,
    integrate3d,
    lp_norm,
    make_grid,
    radial_laplacian,
    scale_transform,
)

__all__ = ["run_verification"]


def _check_quadrature(seed):
    errs = []
    for n in (513, 1025, 2049):
        grid = make_grid(40.0, n)
        val = integrate3d(RadialField.from_function(grid, lambda r: np.exp(-r)))
        errs.append(abs(val - 8.0 * np.pi))
    ratios = [errs[i] / max(errs[i + 1], 1e-300) for i in range(2)]
    ok = all(rat >= 3.5 for rat in ratios)
    return ok, f"error ratios under halving: {ratios[0]:.2f}, {ratios[1]:.2f} (>= 3.5)"


def _check_poisson(seed):
    grid = make_grid(40.0, 4096)
    u = RadialField.from_function(grid, lambda r: np.exp(-r / 2.0))
    phi = newtonian_potential(u)
    r = grid.r
    exact = np.empty_like(r)
    a_part = 2.0 - np.exp(-r) * (r**2 + 2.0 * r + 2.0)
    b_part = np.exp(-r) * (r + 1.0)
    exact[1:] = a_part[1:] / r[1:] + b_part[1:]
    exact[0] = 1.0
    err = float(np.max(np.abs(phi.values - exact) / np.abs(exact)))
    n_err = abs(nonlocal_energy(u) / (5.0 * np.pi) - 1.0)
    ok = err <= 1e-4 and n_err <= 1e-3
    return ok, f"max rel potential error {err:.2e}, self-energy rel error {n_err:.2e}"


def _check_kernel_symmetry(seed):
    grid = make_grid(20.0, 1024)
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(20):
        u = random_smooth_field(grid, rng)
        v = random_smooth_field(grid, rng)
        phi_u = newtonian_potential(u)
        phi_v = newtonian_potential(v)
        a = integrate3d(RadialField(grid, phi_u.values * v.values**2))
        b = integrate3d(RadialField(grid, phi_v.values * u.values**2))
        worst = max(worst, abs(a - b) / max(abs(a), abs(b), 1e-300))
    return worst <= 1e-8, f"worst relative asymmetry {worst:.2e}"


def _check_poisson_pde(seed):
    # the cumulative Green's split inverts the discrete radial Laplacian
    # exactly, so the residual sits at rounding level, far inside any O(h^2)
    # envelope
    worst = 0.0
    for n in (1025, 2049):
        grid = make_grid(40.0, n)
        u = RadialField.from_function(grid, lambda r: np.exp(-r / 2.0))
        phi = newtonian_potential(u)
        res = radial_laplacian(phi) + u.values**2
        worst = max(worst, float(np.max(np.abs(res[1:-1]))))
    return worst <= 1e-9, f"max |Delta phi + u^2| = {worst:.2e} (rounding level)"


def _check_gradients(seed):
    grid = make_grid(20.0, 1024)
    rng = np.random.default_rng(seed)
    g = make_source(grid, "exponential", 0.8)
    prob = Problem(lam=1.0, p=2.6, g=g)
    eps = 1e-5
    worst = 0.0
    for _ in range(6):
        u = random_smooth_field(grid, rng, amplitude=2.0)
        v = random_smooth_field(grid, rng, amplitude=2.0)
        up = RadialField(grid, u.values + eps * v.values)
        um = RadialField(grid, u.values - eps * v.values)
        cases = [
            (energy(prob, up).total, energy(prob, um).total, gradient(prob, u)),
            (
                energy_mu(prob, 0.6, up).total,
                energy_mu(prob, 0.6, um).total,
                gradient(prob, u, mu=0.6),
            ),
        ]
        cut = CutoffSpec(float(np.sqrt(h1_norm_sq(u) / 1.5)))
        cases.append(
            (
                energy_cutoff(prob, cut, up).total,
                energy_cutoff(prob, cut, um).total,
                gradient_cutoff(prob, cut, u),
            )
        )
        for ep, em, grad in cases:
            fd = (ep - em) / (2.0 * eps)
            pair = integrate3d(RadialField(grid, grad.values * v.values))
            worst = max(worst, abs(fd - pair) / max(abs(fd), abs(pair), 1.0))
    return worst <= 1e-5, f"worst directional-derivative mismatch {worst:.2e}"


def _check_ruiz(seed):
    grid = make_grid(20.0, 1024)
    rng = np.random.default_rng(seed)
    worst = np.inf
    for _ in range(100):
        u = random_smooth_field(grid, rng, amplitude=2.0)
        for lam in (0.1, 1.0, 10.0, 100.0):
            worst = min(worst, ruiz_gap(u, lam))
    return worst >= -1e-9, f"smallest gap {worst:.3e}"


def _check_ring_bound(seed):
    grid = make_grid(20.0, 1024)
    rng = np.random.default_rng(seed)
    s = sobolev_constant(2.8, grid, seed=seed)
    geo0 = geometry_constants(2.8, s, 0.0)
    g = make_source(grid, "gaussian", 0.7 * geo0.c_p)
    geo = geometry_constants(2.8, s, lp_norm(g, 2))
    worst = np.inf
    for _ in range(50):
        u = random_smooth_field(grid, rng, amplitude=2.0)
        scale = geo.alpha / np.sqrt(h1_norm_sq(u))
        u = RadialField(grid, scale * u.values)
        for lam in (0.0, 0.5, 1.0, 10.0):
            prob = Problem(lam=lam, p=2.8, g=g)
            worst = min(worst, energy(prob, u).total - geo.rho)
    return worst >= -1e-9, f"smallest margin above rho: {worst:.3e}"


def _check_identity_crosscheck(seed):
    grid = make_grid(20.0, 1024)
    rng = np.random.default_rng(seed)
    g = make_source(grid, "exponential", 0.9)
    prob = Problem(lam=1.7, p=3.3, g=g)
    worst = 0.0
    for _ in range(20):
        u = random_smooth_field(grid, rng, amplitude=3.0)
        brk = energy(prob, u)
        scale = abs(brk.h1_part) + abs(brk.power_part) + abs(brk.nonlocal_part) + 1.0
        diff = abs(decomposition_check(prob, u) - nehari_residual(prob, 1.0, u))
        worst = max(worst, diff / scale)
    return worst <= 1e-10, f"worst normalized difference {worst:.2e}"


def _check_cutoff_profile(seed):
    ts = np.linspace(0.0, 3.0, 3001)
    vals = np.array([cutoff_eta(float(t)) for t in ts])
    slopes = np.array([cutoff_eta_prime(float(t)) for t in ts])
    ok = (
        np.all(vals[ts <= 1.0] == 1.0)
        and np.all(vals[ts >= 2.0] == 0.0)
        and np.all((0.0 <= vals) & (vals <= 1.0))
        and np.max(np.abs(slopes)) <= 2.0
        and cutoff_eta(1.5) == 0.5
    )
    return ok, f"max |eta'| = {np.max(np.abs(slopes)):.4f} (<= 2)"


def _check_scaling(seed):
    grid = make_grid(20.0, 2049)
    w = RadialField.from_function(grid, lambda r: np.exp(-r / 2.0))
    t = 2.0
    wt = scale_transform(w, t)
    k_expect = t**3 * 2.0 * np.pi + t * 8.0 * np.pi
    p_expect = t**5 * np.pi
    e1 = abs(h1_norm_sq(wt) / k_expect - 1.0)
    e2 = abs(lp_norm(wt, 4.0) ** 4 / p_expect - 1.0)
    ok = e1 <= 1e-3 and e2 <= 1e-3
    return ok, f"norm scaling error {e1:.2e}, power scaling error {e2:.2e}"


def _check_geometry(seed):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(20):
        p = rng.uniform(1.1, 4.9)
        s = rng.uniform(0.5, 4.0)
        geo = geometry_constants(p, s, 0.0)
        worst = max(worst, abs(geo.c_p - geo.alpha * (p - 1.0) / (2.0 * p)))
    return worst <= 1e-12, f"worst |C_p - alpha (p-1)/(2p)| = {worst:.2e}"


def run_verification(seed: int = 0) -> list[tuple[str, bool, str]]:
    """Run all checks; returns a list of (name, passed, detail)."""
    checks = [
        ("quadrature convergence", _check_quadrature),
        ("poisson closed form", _check_poisson),
        ("poisson kernel symmetry", _check_kernel_symmetry),
        ("poisson pde residual", _check_poisson_pde),
        ("functional gradients", _check_gradients),
        ("ruiz inequality", _check_ruiz),
        ("mountain ring bound", _check_ring_bound),
        ("identity cross-check", _check_identity_crosscheck),
        ("cut-off profile", _check_cutoff_profile),
        ("scaling transform", _check_scaling),
        ("geometry constants", _check_geometry),
    ]
    results = []
    for name, fn in checks:
        try:
            passed, detail = fn(seed)
        except Exception as err:  # a crashed check is a failed check
            passed, detail = False, f"raised {type(err).__name__}: {err}"
        results.append((name, bool(passed), detail))
    return results
