"""Energy functionals of the radial Schrodinger-Maxwell system.

The basic functional on H^1_r is

    I(u) = 1/2 ||u||^2 + (lam/4) int phi_u u^2 - 1/(p+1) int |u|^{p+1} - int g u,

together with two variants used by the solvers: the family
I_mu(u) = A(u) - mu * B(u) that scales only the power term by mu in [1/2, 1],
and the truncated functional whose nonlocal term is damped by
psi(u) = eta(||u||^2 / M^2) for a smooth cut-off eta.

Gradients are the exact derivatives of the discrete functionals (so central
finite differences of the assembled energy reproduce them to rounding); the
returned field is the strong-form residual -Delta u + u + lam psi phi_u u -
mu |u|^{p-1} u - g in the sense grad = dual / W, with the symmetric origin
formula at r = 0.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .operators import apply_h1_dual
from .poisson import potential_of_density
from .radial import RadialField, RadialGrid, h1_values_sq

__all__ = [
    "Problem",
    "EnergyBreakdown",
    "GeometryConstants",
    "CutoffSpec",
    "cutoff_eta",
    "cutoff_eta_prime",
    "energy",
    "energy_mu",
    "energy_cutoff",
    "gradient",
    "gradient_cutoff",
    "sobolev_constant",
    "geometry_constants",
]


@dataclass(frozen=True)
class Problem:
    """Coupling lam >= 0, power p in (1,5), and the radial source g."""

    lam: float
    p: float
    g: RadialField

    def __post_init__(self):
        if not 1.0 < self.p < 5.0:
            raise ValueError(f"exponent p must lie in (1, 5), got {self.p}")
        if not np.isfinite(self.lam) or self.lam < 0:
            raise ValueError(f"coupling lam must be >= 0, got {self.lam}")

    @property
    def grid(self) -> RadialGrid:
        return self.g.grid


@dataclass(frozen=True)
class EnergyBreakdown:
    """The four integrals of the functional and the assembled total.

    h1_part is 1/2 ||u||^2; nonlocal_part, power_part and source_part are the
    bare integrals int phi_u u^2, int |u|^{p+1} and int g u, so that

        total = h1_part + (lam/4) psi nonlocal_part
                - (mu/(p+1)) power_part - source_part.
    """

    h1_part: float
    nonlocal_part: float
    power_part: float
    source_part: float
    total: float
    lam: float = 0.0
    mu: float = 1.0
    psi: float = 1.0


@dataclass(frozen=True)
class GeometryConstants:
    """Sobolev constant and the ring geometry derived from it."""

    s: float
    c_p: float
    alpha: float
    rho: float
    g_l2: float
    satisfies_g3: bool


# --- cut-off profile ---------------------------------------------------------

# quintic smoothstep bridge: all four constraints of the cut-off (plateau 1 on
# [0,1], 0 beyond 2, values in [0,1], slope bounded by 2) hold with closed-form
# derivatives; the maximal slope is 15/8.


def cutoff_eta(t: float) -> float:
    """Smooth cut-off: 1 on [0,1], quintic bridge on (1,2), 0 on [2,inf)."""
    if t < 0:
        raise ValueError(f"cut-off argument must be >= 0, got {t}")
    if t <= 1.0:
        return 1.0
    if t >= 2.0:
        return 0.0
    x = t - 1.0
    return 1.0 - x**3 * (10.0 + x * (-15.0 + 6.0 * x))


def cutoff_eta_prime(t: float) -> float:
    """Derivative of cutoff_eta; vanishes outside (1,2), min value -15/8."""
    if t < 0:
        raise ValueError(f"cut-off argument must be >= 0, got {t}")
    if t <= 1.0 or t >= 2.0:
        return 0.0
    x = t - 1.0
    return -30.0 * x**2 * (x - 1.0) ** 2


def cutoff_eta_second(t: float) -> float:
    if t <= 1.0 or t >= 2.0:
        return 0.0
    x = t - 1.0
    return -60.0 * x * (x - 1.0) * (2.0 * x - 1.0)


@dataclass(frozen=True)
class CutoffSpec:
    """Truncation radius M for psi(u) = eta(||u||^2 / M^2)."""

    m0: float

    def __post_init__(self):
        if not np.isfinite(self.m0) or self.m0 <= 0:
            raise ValueError(f"truncation radius must be positive, got {self.m0}")

    def psi(self, h1_sq: float) -> float:
        return cutoff_eta(h1_sq / self.m0**2)


# --- assembly ----------------------------------------------------------------


def _parts(grid: RadialGrid, g_values: np.ndarray, p: float, values: np.ndarray):
    """The four integrals (H, N, P, G); batched over leading axes of values."""
    w = grid.weights
    h1_sq = h1_values_sq(grid, values)
    phi = potential_of_density(grid, values**2)
    nonlocal_part = (phi * values**2) @ w
    power_part = np.abs(values) ** (p + 1.0) @ w
    source_part = (values * g_values) @ w
    return h1_sq, nonlocal_part, power_part, source_part


def _totals(lam, p, mu, psi, h1_sq, nonlocal_part, power_part, source_part):
    # single assembly expression shared by all variants so that the plateau
    # of the cut-off functional agrees with the plain one bitwise
    return (
        0.5 * h1_sq
        + 0.25 * lam * psi * nonlocal_part
        - (mu / (p + 1.0)) * power_part
        - source_part
    )


def _breakdown(prob: Problem, values: np.ndarray, mu: float, psi: float):
    h1_sq, n_part, p_part, g_part = _parts(prob.grid, prob.g.values, prob.p, values)
    total = _totals(prob.lam, prob.p, mu, psi, h1_sq, n_part, p_part, g_part)
    return EnergyBreakdown(
        h1_part=0.5 * h1_sq,
        nonlocal_part=float(n_part),
        power_part=float(p_part),
        source_part=float(g_part),
        total=float(total),
        lam=prob.lam,
        mu=mu,
        psi=psi,
    )


def _check_grid(prob: Problem, u: RadialField) -> None:
    if u.grid != prob.grid:
        raise ValueError("field grid does not match problem grid")


def energy(prob: Problem, u: RadialField) -> EnergyBreakdown:
    """The functional I_lam at u."""
    _check_grid(prob, u)
    return _breakdown(prob, u.values, 1.0, 1.0)


def energy_mu(prob: Problem, mu: float, u: RadialField) -> EnergyBreakdown:
    """The perturbed functional A(u) - mu B(u) with mu in [1/2, 1]."""
    if not 0.5 <= mu <= 1.0:
        raise ValueError(f"mu must lie in [1/2, 1], got {mu}")
    _check_grid(prob, u)
    return _breakdown(prob, u.values, float(mu), 1.0)


def energy_cutoff(prob: Problem, cut: CutoffSpec, u: RadialField) -> EnergyBreakdown:
    """The truncated functional with the nonlocal term damped by psi."""
    _check_grid(prob, u)
    h1_sq = h1_values_sq(prob.grid, u.values)
    psi = cutoff_eta(h1_sq / cut.m0**2)
    return _breakdown(prob, u.values, 1.0, psi)


# --- gradients ---------------------------------------------------------------


class GradientData:
    """Gradient of a functional variant at fixed u, with the pieces needed by
    line searches and Hessian products."""

    __slots__ = (
        "values", "phi", "h1_sq", "nonlocal_part", "a_u",
        "psi", "eta_p", "eta_pp", "c1", "dual", "mu", "cut",
    )

    def __init__(self, prob: Problem, values: np.ndarray, mu: float = 1.0,
                 cut: CutoffSpec | None = None):
        grid = prob.grid
        w = grid.weights
        self.values = values
        self.mu = mu
        self.cut = cut
        self.phi = potential_of_density(grid, values**2)
        self.h1_sq = float(h1_values_sq(grid, values))
        self.nonlocal_part = float((self.phi * values**2) @ w)
        self.a_u = apply_h1_dual(grid, values)
        if cut is None:
            self.psi, self.eta_p, self.eta_pp = 1.0, 0.0, 0.0
            self.c1 = 1.0
        else:
            t = self.h1_sq / cut.m0**2
            self.psi = cutoff_eta(t)
            self.eta_p = cutoff_eta_prime(t)
            self.eta_pp = cutoff_eta_second(t)
            self.c1 = 1.0 + (0.5 * prob.lam / cut.m0**2) * self.eta_p * self.nonlocal_part
        power = np.sign(values) * np.abs(values) ** prob.p
        self.dual = (
            self.c1 * self.a_u
            + prob.lam * self.psi * (w * self.phi * values)
            - mu * (w * power)
            - w * prob.g.values
        )


def _gradient_field(prob: Problem, data: GradientData) -> RadialField:
    grid = prob.grid
    w = grid.weights
    u = data.values
    vals = np.empty_like(u)
    vals[1:] = data.dual[1:] / w[1:]
    # strong form at the origin (weightless node): Delta u(0) = 6 (u1-u0)/h^2
    lap0 = 6.0 * (u[1] - u[0]) / grid.h**2
    vals[0] = (
        data.c1 * (-lap0 + u[0])
        + prob.lam * data.psi * data.phi[0] * u[0]
        - data.mu * np.sign(u[0]) * np.abs(u[0]) ** prob.p
        - prob.g.values[0]
    )
    return RadialField(grid, vals)


def gradient(prob: Problem, u: RadialField, mu: float = 1.0) -> RadialField:
    """Strong-form residual of I_lam (or of the mu-family when mu is given)."""
    _check_grid(prob, u)
    return _gradient_field(prob, GradientData(prob, u.values, mu=mu))


def gradient_cutoff(prob: Problem, cut: CutoffSpec, u: RadialField) -> RadialField:
    """Strong-form residual of the truncated functional, including the
    chain-rule term from psi(u)."""
    _check_grid(prob, u)
    return _gradient_field(prob, GradientData(prob, u.values, cut=cut))


# --- geometry constants ------------------------------------------------------


def geometry_constants(p: float, s: float, g_l2: float) -> GeometryConstants:
    """Ring radius alpha, smallness threshold C_p and ring level rho.

    alpha maximizes h(t) = t/2 - t^p / ((p+1) S^{p+1}) and h(alpha) = C_p =
    alpha (p-1)/(2p); the functional is >= rho on the sphere ||u|| = alpha
    whenever |g|_2 < C_p.
    """
    if not 1.0 < p < 5.0:
        raise ValueError(f"exponent p must lie in (1, 5), got {p}")
    if s <= 0:
        raise ValueError(f"Sobolev constant must be positive, got {s}")
    alpha = ((p + 1.0) * s ** (p + 1.0) / (2.0 * p)) ** (1.0 / (p - 1.0))
    c_p = (p - 1.0) / (2.0 * p) * alpha
    rho = alpha * (c_p - g_l2)
    return GeometryConstants(
        s=float(s), c_p=float(c_p), alpha=float(alpha), rho=float(rho),
        g_l2=float(g_l2), satisfies_g3=bool(g_l2 < c_p),
    )


# --- Sobolev constant --------------------------------------------------------


def _sobolev_starts(grid: RadialGrid, seed: int) -> list[np.ndarray]:
    r = grid.r
    starts = [
        np.exp(-(r**2) / 2.0),
        np.exp(-r),
        np.exp(-r / 2.0),
        (1.0 + r**2) * np.exp(-(r**2)),
    ]
    rng = np.random.default_rng(seed)
    for _ in range(2):
        vals = np.zeros_like(r)
        for _ in range(3):
            a = rng.uniform(0.2, 1.0)
            b = rng.uniform(0.1, 1.0)
            vals += a * np.exp(-b * r**2)
        starts.append(vals)
    return starts


def sobolev_constant(
    p: float,
    grid: RadialGrid,
    seed: int = 0,
    max_iter: int = 4000,
    tol: float = 1e-12,
) -> float:
    """Estimate S = inf ||u|| / |u|_{p+1} over the grid space.

    Minimizes the scale-invariant log quotient by preconditioned descent from
    several starting profiles; the returned value is the best quotient found,
    hence an upper bound on the discrete infimum.
    """
    from .operators import SobolevPreconditioner, apply_h1_dual  # local alias

    if not 1.0 < p < 5.0:
        raise ValueError(f"exponent p must lie in (1, 5), got {p}")
    w = grid.weights
    prec = SobolevPreconditioner(grid)
    q = p + 1.0

    def parts(vals):
        h1_sq = float(h1_values_sq(grid, vals))
        pw = float(np.abs(vals) ** q @ w)
        return h1_sq, pw

    best = np.inf
    converged_any = False
    for start in _sobolev_starts(grid, seed):
        u = start / np.sqrt(float(h1_values_sq(grid, start)))
        h1_sq, pw = parts(u)
        j = 0.5 * np.log(h1_sq) - np.log(pw) / q
        step = 1.0
        stall = 0
        for _ in range(max_iter):
            dual = apply_h1_dual(grid, u) / h1_sq - (
                w * np.sign(u) * np.abs(u) ** p
            ) / pw
            d = prec.solve(dual)
            slope = float(dual @ d)
            if slope <= tol:
                converged_any = True
                break
            accepted = False
            s = step
            for _ in range(40):
                cand = u - s * d
                h1_c, pw_c = parts(cand)
                if pw_c > 0 and h1_c > 0:
                    j_c = 0.5 * np.log(h1_c) - np.log(pw_c) / q
                    if j_c <= j - 1e-4 * s * slope:
                        accepted = True
                        break
                s *= 0.5
            if not accepted:
                stall += 1
                if stall > 3:
                    break
                step *= 0.25
                continue
            if j - j_c < 1e-15 * (1.0 + abs(j)):
                stall += 1
                if stall > 5:
                    converged_any = True
                    break
            else:
                stall = 0
            u, h1_sq, pw, j = cand / np.sqrt(h1_c), h1_c, pw_c, j_c
            # renormalize against drift; quotient is scale invariant
            h1_sq, pw = parts(u)
            j = 0.5 * np.log(h1_sq) - np.log(pw) / q
            step = min(s * 2.0, 4.0)
        quotient = np.sqrt(h1_sq) / pw ** (1.0 / q)
        best = min(best, float(quotient))
    if not converged_any:
        raise RuntimeError("Sobolev quotient descent did not converge from any start")
    return best
