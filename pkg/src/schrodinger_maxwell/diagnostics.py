"""Identity and inequality checks for computed or synthetic fields.

Every critical point must satisfy a Pohozaev-type identity, the Nehari
identity <I'(u), u> = 0, and the solution-energy decomposition obtained by
eliminating <I'(u), u>; the Ruiz inequality

    sqrt(lam/8) int |u|^3 <= 1/4 int |grad u|^2 + (lam/8) int phi_u u^2

holds for every field and is the sharpest joint test of the Poisson solver
and the cubic-norm quadrature.  The nonexistence scan sweeps the coupling
and reports where the positive-energy certification protocol stops
succeeding; failure to certify is reported as data, never as a proof.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .energy import Problem, energy
from .poisson import newtonian_potential, nonlocal_energy
from .radial import RadialField, diff, grad_norm_sq, integrate3d, lp_norm
from .solvers import (
    CertificationError,
    GeometryError,
    NonConvergenceError,
    SolverConfig,
    local_minimizer,
    solve_two_solutions,
)

__all__ = [
    "IdentityReport",
    "pohozaev_residual",
    "nehari_residual",
    "decomposition_check",
    "ruiz_gap",
    "identity_report",
    "theorem_41_bound",
    "nonexistence_scan",
]


@dataclass(frozen=True)
class IdentityReport:
    pohozaev_residual: float
    pohozaev_scale: float
    nehari_residual: float
    decomposition_residual: float
    ruiz_gap: float

    @property
    def pohozaev_relative(self) -> float:
        return abs(self.pohozaev_residual) / max(self.pohozaev_scale, 1e-300)


def pohozaev_residual(prob: Problem, mu: float, u: RadialField) -> float:
    """LHS minus RHS of the Pohozaev identity

    int [ 1/2 |grad u|^2 + 3/2 u^2 + 5/4 lam phi_u u^2 ]
      = int [ 3 mu/(p+1) |u|^{p+1} + (3 g + r g') u ].

    The radial derivative of the source is taken by finite differences on
    its samples.
    """
    grid = u.grid
    lhs = (
        0.5 * grad_norm_sq(u)
        + 1.5 * lp_norm(u, 2) ** 2
        + 1.25 * prob.lam * nonlocal_energy(u)
    )
    g_vals = prob.g.values
    r_gp = grid.r * diff(g_vals, grid.h)
    rhs = (3.0 * mu / (prob.p + 1.0)) * lp_norm(u, prob.p + 1.0) ** (prob.p + 1.0) + (
        integrate3d(RadialField(grid, (3.0 * g_vals + r_gp) * u.values))
    )
    return float(lhs - rhs)


def _pohozaev_scale(prob: Problem, mu: float, u: RadialField) -> float:
    """|LHS| + |RHS| of the identity, for scale-free reporting."""
    grid = u.grid
    lhs = (
        0.5 * grad_norm_sq(u)
        + 1.5 * lp_norm(u, 2) ** 2
        + 1.25 * prob.lam * nonlocal_energy(u)
    )
    g_vals = prob.g.values
    r_gp = grid.r * diff(g_vals, grid.h)
    rhs = (3.0 * mu / (prob.p + 1.0)) * lp_norm(u, prob.p + 1.0) ** (prob.p + 1.0) + (
        integrate3d(RadialField(grid, (3.0 * g_vals + r_gp) * u.values))
    )
    return abs(float(lhs)) + abs(float(rhs))


def nehari_residual(prob: Problem, mu: float, u: RadialField) -> float:
    """||u||^2 + lam int phi_u u^2 - mu |u|_{p+1}^{p+1} - int g u,
    i.e. the pairing <I'(u), u> of the mu-family."""
    from .radial import h1_norm_sq

    return float(
        h1_norm_sq(u)
        + prob.lam * nonlocal_energy(u)
        - mu * lp_norm(u, prob.p + 1.0) ** (prob.p + 1.0)
        - integrate3d(RadialField(u.grid, prob.g.values * u.values))
    )


def decomposition_check(prob: Problem, u: RadialField) -> float:
    """Energy decomposition at solutions:

    I(u) + 1/2 ||u||^2 + (3 lam/4) int phi_u u^2 - p/(p+1) |u|_{p+1}^{p+1}

    vanishes exactly when <I'(u), u> = 0; algebraically it equals
    nehari_residual(mu=1) for every field, which guards the assembly
    consistency across modules.
    """
    brk = energy(prob, u)
    return float(
        brk.total
        + brk.h1_part
        + 0.75 * prob.lam * brk.nonlocal_part
        - (prob.p / (prob.p + 1.0)) * brk.power_part
    )


def ruiz_gap(u: RadialField, lam: float) -> float:
    """RHS minus LHS of the Ruiz inequality; nonnegative for every field."""
    if lam < 0:
        raise ValueError(f"coupling must be >= 0, got {lam}")
    rhs = 0.25 * grad_norm_sq(u) + 0.125 * lam * nonlocal_energy(u)
    lhs = np.sqrt(lam / 8.0) * lp_norm(u, 3.0) ** 3
    return float(rhs - lhs)


def identity_report(prob: Problem, mu: float, u: RadialField) -> IdentityReport:
    return IdentityReport(
        pohozaev_residual=pohozaev_residual(prob, mu, u),
        pohozaev_scale=_pohozaev_scale(prob, mu, u),
        nehari_residual=nehari_residual(prob, mu, u),
        decomposition_residual=decomposition_check(prob, u),
        ruiz_gap=ruiz_gap(u, prob.lam),
    )


def theorem_41_bound(prob: Problem, u: RadialField) -> dict:
    """The nonexistence bound chain at a (near-)solution w:

        I(w) = -[ 1/2 ||w||^2 + (3 lam/4) int phi_w w^2 - p/(p+1) |w|^{p+1} ]
             <= -[ 1/2 |w|_2^2 + sqrt(lam/2) |w|_3^3 - p/(p+1) |w|^{p+1} ]

    The first step is the solution-energy decomposition (an identity at
    critical points); the second relaxes it with the Ruiz inequality.  The
    sign of the relaxed bound decides whether positive energy is possible.
    """
    brk = energy(prob, u)
    p = prob.p
    eq41_value = -(
        brk.h1_part
        + 0.75 * prob.lam * brk.nonlocal_part
        - (p / (p + 1.0)) * brk.power_part
    )
    relaxed = -(
        0.5 * lp_norm(u, 2.0) ** 2
        + np.sqrt(prob.lam / 2.0) * lp_norm(u, 3.0) ** 3
        - (p / (p + 1.0)) * brk.power_part
    )
    scale = abs(brk.total) + abs(eq41_value) + abs(relaxed)
    return {
        "energy": brk.total,
        "eq41_value": float(eq41_value),
        "relaxed_bound": float(relaxed),
        "scale": float(scale),
        "identity_residual": float(brk.total - eq41_value),
        "relaxation_slack": float(relaxed - eq41_value),
        "bound_sign_negative": bool(relaxed < 0.0),
    }


def nonexistence_scan(
    template: Problem,
    lambdas,
    cfg: SolverConfig = SolverConfig(),
    max_iter_per_stage: int = 4000,
) -> tuple[list[dict], dict]:
    """Run the two-solution protocol over an increasing coupling list.

    Per coupling the record holds the minimizer data, whether a
    positive-energy critical point was certified (residual within tolerance
    and norm within the truncation radius), and the nonexistence bound chain
    at every genuine critical point found.  Sub-solver failures are recorded
    and the scan continues.

    Returns (records, summary); the summary marks the smallest coupling at
    which certification first fails and flags any re-certification at larger
    couplings as a solver artifact.
    """
    lambdas = [float(x) for x in lambdas]
    if any(b <= a for a, b in zip(lambdas, lambdas[1:])):
        raise ValueError("couplings must be strictly increasing")
    stage_cfg = replace(cfg, max_iter=min(cfg.max_iter, max_iter_per_stage))
    records: list[dict] = []
    for lam in lambdas:
        prob = replace(template, lam=lam)
        rec: dict = {"lambda": lam, "certified": False, "error": None}
        try:
            u0, u1 = solve_two_solutions(prob, stage_cfg)
            certified = u1.grad_residual <= stage_cfg.tol_grad
            if u1.info.get("route") == "cutoff":
                certified = certified and u1.info["norm_u1"] <= u1.info["m0"]
            rec["certified"] = bool(certified)
            rec["u0"] = u0
            rec["u1"] = u1
            rec["energy_u0"] = u0.energy
            rec["energy_u1"] = u1.energy
            rec["m0"] = u1.info.get("m0")
            rec["lambda_gate"] = u1.info.get("lambda_gate")
            rec["bounds"] = {
                "u0": theorem_41_bound(prob, u0.u),
                "u1": theorem_41_bound(prob, u1.u),
            }
        except (CertificationError, NonConvergenceError, GeometryError, ValueError) as err:
            rec["error"] = f"{type(err).__name__}: {err}"
            # the minimizer exists for every coupling; keep it in the record
            try:
                from .energy import geometry_constants, sobolev_constant
                from .radial import lp_norm as _lp

                s = sobolev_constant(prob.p, prob.grid, seed=stage_cfg.seed)
                geo = geometry_constants(prob.p, s, _lp(prob.g, 2))
                u0 = local_minimizer(prob, geo, stage_cfg)
                rec["u0"] = u0
                rec["energy_u0"] = u0.energy
                rec["bounds"] = {"u0": theorem_41_bound(prob, u0.u)}
            except (NonConvergenceError, GeometryError) as err0:
                rec["error"] += f"; minimizer also failed: {err0}"
        records.append(rec)

    first_failure = next(
        (r["lambda"] for r in records if not r["certified"]), None
    )
    anomalies = []
    if first_failure is not None:
        anomalies = [
            r["lambda"]
            for r in records
            if r["lambda"] > first_failure and r["certified"]
        ]
    summary = {
        "first_failure_lambda": first_failure,
        "recertified_lambdas": anomalies,
        "monotone_presentation": not anomalies,
    }
    return records, summary
