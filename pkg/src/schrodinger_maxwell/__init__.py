"""Radial variational solver for a nonhomogeneous Schrodinger-Maxwell system.

The system couples a Schrodinger field u to its own Newtonian potential,

    -Delta u + u + lam phi u = |u|^{p-1} u + g(r),   -Delta phi = u^2,

on R^3 with radial data.  For a small nonnegative source (|g|_2 below the
threshold C_p derived from the Sobolev constant) the energy functional has
two critical points: a negative-energy local minimizer inside the mountain
ring and a positive-energy mountain-pass point.  This package computes both,
verifies the identities every solution must satisfy (Pohozaev, Nehari,
energy decomposition, the Ruiz inequality), and scans the coupling for the
regime where no positive-energy solution can be certified.
"""

from .radial import (
    RadialGrid,
    RadialField,
    make_grid,
    integrate3d,
    h1_norm_sq,
    h1_inner,
    grad_norm_sq,
    lp_norm,
    scale_transform,
    radial_laplacian,
)
from .poisson import newtonian_potential, nonlocal_energy
from .energy import (
    Problem,
    EnergyBreakdown,
    GeometryConstants,
    CutoffSpec,
    cutoff_eta,
    cutoff_eta_prime,
    energy,
    energy_mu,
    energy_cutoff,
    gradient,
    gradient_cutoff,
    sobolev_constant,
    geometry_constants,
)
from .profiles import make_source, random_smooth_field
from .solvers import (
    SolverConfig,
    CriticalPoint,
    MountainPassPath,
    NonConvergenceError,
    GeometryError,
    CertificationError,
    plain_functional,
    mu_family_functional,
    cutoff_functional,
    sobolev_gradient,
    local_minimizer,
    find_endpoint,
    mountain_pass,
    mu_continuation,
    solve_two_solutions,
)
from .diagnostics import (
    IdentityReport,
    pohozaev_residual,
    nehari_residual,
    decomposition_check,
    ruiz_gap,
    identity_report,
    theorem_41_bound,
    nonexistence_scan,
)
from .cli import RunConfig, ConfigError, parse_config, run

__version__ = "0.1.0"

__all__ = [
    "RadialGrid", "RadialField", "make_grid", "integrate3d", "h1_norm_sq",
    "h1_inner", "grad_norm_sq", "lp_norm", "scale_transform",
    "radial_laplacian", "newtonian_potential", "nonlocal_energy", "Problem",
    "EnergyBreakdown", "GeometryConstants", "CutoffSpec", "cutoff_eta",
    "cutoff_eta_prime", "energy", "energy_mu", "energy_cutoff", "gradient",
    "gradient_cutoff", "sobolev_constant", "geometry_constants",
    "make_source", "random_smooth_field", "SolverConfig", "CriticalPoint",
    "MountainPassPath", "NonConvergenceError", "GeometryError",
    "CertificationError", "plain_functional", "mu_family_functional",
    "cutoff_functional", "sobolev_gradient", "local_minimizer",
    "find_endpoint", "mountain_pass", "mu_continuation",
    "solve_two_solutions", "IdentityReport", "pohozaev_residual",
    "nehari_residual", "decomposition_check", "ruiz_gap", "identity_report",
    "theorem_41_bound", "nonexistence_scan", "RunConfig", "ConfigError",
    "parse_config", "run",
]
