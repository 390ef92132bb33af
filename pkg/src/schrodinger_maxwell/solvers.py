"""Critical-point solvers.

Two kinds of critical points are computed:

* the negative-energy local minimizer, by projected Armijo descent with the
  Sobolev (preconditioned) gradient inside the ball ||u|| <= alpha;
* the positive-energy mountain-pass point, by path deformation: the segment
  from 0 to a negative-energy endpoint is discretized, the node of maximal
  energy takes a preconditioned descent step, and nodes are redistributed by
  H^1 arclength.  Deformation drives the path maximum down to the inf-max
  level; once the maximizer's residual is small, a Newton stage (matrix-free
  MINRES on the exact Hessian) polishes it to the gradient tolerance, which
  single-node steepest descent cannot reach reliably on its own.

For p in (2,5) the mountain-pass point of the full functional is reached by
continuation in the power coefficient mu from 1/2 to 1, warm-starting each
stage at the previous solution.  For p in (1,2] the nonlocal term is
truncated at radius M0; a solution of the truncated problem with
||u|| <= M0 lies on the plateau of the cut-off and is therefore a genuine
critical point of the untruncated functional.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np
from scipy.sparse.linalg import LinearOperator, minres

from .energy import (
    CutoffSpec,
    GeometryConstants,
    GradientData,
    Problem,
    cutoff_eta,
    energy,
    geometry_constants,
    sobolev_constant,
)
from .operators import SobolevPreconditioner, apply_h1_dual, residual_norm
from .poisson import potential_of_density
from .radial import RadialField, h1_values_sq, lp_norm

__all__ = [
    "SolverConfig",
    "CriticalPoint",
    "MountainPassPath",
    "NonConvergenceError",
    "GeometryError",
    "CertificationError",
    "Objective",
    "plain_functional",
    "mu_family_functional",
    "cutoff_functional",
    "sobolev_gradient",
    "local_minimizer",
    "find_endpoint",
    "mountain_pass",
    "mu_continuation",
    "solve_two_solutions",
]


class NonConvergenceError(RuntimeError):
    """A solver exhausted its iteration budget."""


class GeometryError(RuntimeError):
    """The mountain-pass or ball geometry was violated numerically."""


class CertificationError(RuntimeError):
    """The cut-off route could not certify a genuine critical point."""


@dataclass(frozen=True)
class SolverConfig:
    tol_grad: float = 1e-6
    max_iter: int = 20000
    path_nodes: int = 41
    mu_points: int = 11
    seed: int = 0
    cutoff_m0: float | None = None
    # internal knobs
    newton_max: int = 60
    krylov_max: int = 400
    redistribute_every: int = 10


@dataclass(frozen=True)
class CriticalPoint:
    u: RadialField
    energy: float
    grad_residual: float
    kind: str  # "minimizer" | "mountain_pass"
    level_estimate: float | None = None
    iterations: int = 0
    info: dict = field(default_factory=dict)


@dataclass(frozen=True)
class MountainPassPath:
    """Snapshot of a deformed path from 0 to the endpoint."""

    nodes: list[RadialField]
    energies: np.ndarray
    max_index: int


# --- functional abstraction ---------------------------------------------------


def _eta_batch(t: np.ndarray) -> np.ndarray:
    out = np.ones_like(t)
    bridge = (t > 1.0) & (t < 2.0)
    x = t[bridge] - 1.0
    out[bridge] = 1.0 - x**3 * (10.0 + x * (-15.0 + 6.0 * x))
    out[t >= 2.0] = 0.0
    return out


class Objective:
    """One of the functional variants, with values, exact gradients (in dual
    form) and Hessian products on raw sample arrays."""

    def __init__(self, prob: Problem, mu: float = 1.0, cut: CutoffSpec | None = None):
        self.prob = prob
        self.mu = mu
        self.cut = cut
        self.grid = prob.grid
        self.prec = SobolevPreconditioner(prob.grid)

    def batch_total(self, values: np.ndarray) -> np.ndarray:
        grid, prob = self.grid, self.prob
        w = grid.weights
        h1_sq = np.atleast_1d(h1_values_sq(grid, values))
        phi = potential_of_density(grid, values**2)
        n_part = (phi * values**2) @ w
        p_part = np.abs(values) ** (prob.p + 1.0) @ w
        g_part = values @ (w * prob.g.values)
        if self.cut is None:
            psi = 1.0
        else:
            psi = _eta_batch(h1_sq / self.cut.m0**2)
        return (
            0.5 * h1_sq
            + 0.25 * prob.lam * psi * n_part
            - (self.mu / (prob.p + 1.0)) * p_part
            - g_part
        )

    def total(self, values: np.ndarray) -> float:
        return float(self.batch_total(values[None, :])[0])

    def data(self, values: np.ndarray) -> GradientData:
        return GradientData(self.prob, values, mu=self.mu, cut=self.cut)

    def hvp(self, data: GradientData, v: np.ndarray) -> np.ndarray:
        """Directional derivative of the gradient dual at data.values."""
        prob, grid = self.prob, self.grid
        w = grid.weights
        u = data.values
        a_v = apply_h1_dual(grid, v)
        cross = potential_of_density(grid, u * v)
        out = data.c1 * a_v
        out += prob.lam * data.psi * (w * (data.phi * v + 2.0 * u * cross))
        out -= self.mu * prob.p * (w * np.abs(u) ** (prob.p - 1.0) * v)
        if self.cut is not None:
            m_sq = self.cut.m0**2
            d_h = 2.0 * float(data.a_u @ v)
            d_n = 4.0 * float((w * data.phi * u) @ v)
            d_c1 = (0.5 * prob.lam / m_sq) * (
                data.eta_pp * (d_h / m_sq) * data.nonlocal_part + data.eta_p * d_n
            )
            d_psi = data.eta_p * d_h / m_sq
            out += d_c1 * data.a_u
            out += prob.lam * d_psi * (w * data.phi * u)
        return out


def plain_functional(prob: Problem) -> Objective:
    return Objective(prob)


def mu_family_functional(prob: Problem, mu: float) -> Objective:
    if not 0.5 <= mu <= 1.0:
        raise ValueError(f"mu must lie in [1/2, 1], got {mu}")
    return Objective(prob, mu=mu)


def cutoff_functional(prob: Problem, cut: CutoffSpec) -> Objective:
    return Objective(prob, cut=cut)


def sobolev_gradient(obj: Objective, u: RadialField) -> RadialField:
    """Preconditioned gradient: the solution d of (-Delta + 1) d = residual."""
    data = obj.data(u.values)
    return RadialField(obj.grid, obj.prec.solve(data.dual))


def _slave_origin(values: np.ndarray) -> np.ndarray:
    """The origin sample enters no stencil; set it from the symmetric
    parabola through the first two interior nodes for presentation."""
    out = values.copy()
    out[0] = (4.0 * out[1] - out[2]) / 3.0
    return out


# --- Newton polish -------------------------------------------------------------


def _newton_refine(obj: Objective, values: np.ndarray, tol: float, cfg: SolverConfig):
    """Newton iteration on the gradient dual with MINRES inner solves.
    Returns (values, residual, converged)."""
    grid = obj.grid
    n = grid.n
    u = values.copy()
    data = obj.data(u)
    res = residual_norm(grid, data.dual)

    def make_op(d):
        def matvec(x):
            x = x.copy()
            b0 = x[0]
            x[0] = 0.0
            y = obj.hvp(d, x)
            y[0] = b0
            return y

        return LinearOperator((n, n), matvec=matvec)

    prec_op = LinearOperator((n, n), matvec=obj.prec.solve)
    for _ in range(cfg.newton_max):
        if res <= tol:
            return u, res, True
        rhs = -data.dual
        rhs[0] = 0.0
        delta, _ = minres(
            make_op(data), rhs, M=prec_op, rtol=min(1e-3, 0.1 * res), maxiter=cfg.krylov_max
        )
        step = 1.0
        improved = False
        for _ in range(12):
            cand = u + step * delta
            if np.all(np.isfinite(cand)) and np.max(np.abs(cand)) < 1e12:
                cand_data = obj.data(cand)
                cand_res = residual_norm(grid, cand_data.dual)
                if np.isfinite(cand_res) and cand_res < res * (1.0 - 1e-4 * step):
                    u, data, res = cand, cand_data, cand_res
                    improved = True
                    break
            step *= 0.5
        if not improved:
            return u, res, res <= tol
    return u, res, res <= tol


# --- local minimizer -----------------------------------------------------------


def local_minimizer(
    prob: Problem, geo: GeometryConstants, cfg: SolverConfig = SolverConfig()
) -> CriticalPoint:
    """Minimize the functional over the ball ||u|| <= alpha from u = 0.

    The descent is monotone (Armijo); the returned point is required to be
    interior, hence an unconstrained critical point with negative energy
    (zero when g vanishes identically).
    """
    obj = plain_functional(prob)
    grid = prob.grid
    alpha = geo.alpha
    u = np.zeros(grid.n)
    e_curr = 0.0
    history = [e_curr]
    step = 1.0
    iterations = 0
    projected = False
    tol = cfg.tol_grad

    for it in range(cfg.max_iter):
        iterations = it
        data = obj.data(u)
        res = residual_norm(grid, data.dual)
        if res <= tol:
            break
        if res < 1e-2 * (1.0 + abs(e_curr)):
            # endgame: Newton, accepted only if it keeps the descent monotone
            # and stays inside the ball
            cand, cand_res, ok = _newton_refine(obj, u, tol, cfg)
            if ok:
                e_cand = obj.total(cand)
                norm_cand = np.sqrt(float(h1_values_sq(grid, cand)))
                if e_cand <= e_curr + 1e-12 * (1.0 + abs(e_curr)) and norm_cand <= alpha:
                    u = cand
                    e_curr = e_cand
                    history.append(e_curr)
                    res = cand_res
                    break
        d = obj.prec.solve(data.dual)
        slope = float(data.dual @ d)
        if slope <= 0:
            break
        s = step
        accepted = False
        for _ in range(50):
            cand = u - s * d
            cand_norm = np.sqrt(float(h1_values_sq(grid, cand)))
            was_projected = cand_norm > alpha
            if was_projected:
                cand = cand * (alpha / cand_norm)
            e_cand = obj.total(cand)
            target = e_curr - 1e-4 * s * slope if not was_projected else e_curr
            if np.isfinite(e_cand) and e_cand < target:
                accepted = True
                break
            s *= 0.5
        if not accepted:
            break
        projected = was_projected
        u = cand
        e_curr = e_cand
        history.append(e_curr)
        step = min(s * 2.0, 4.0)
    else:
        raise NonConvergenceError(
            f"local minimizer: residual {res:.3e} > {tol:.1e} after {cfg.max_iter} iterations"
        )

    norm_u = np.sqrt(float(h1_values_sq(grid, u)))
    if res > tol:
        raise NonConvergenceError(
            f"local minimizer stalled at residual {res:.3e} (tol {tol:.1e})"
        )
    if norm_u >= alpha * (1.0 - 1e-9) and projected:
        raise GeometryError(
            f"minimizer pinned to the ball boundary (||u|| = {norm_u:.6g}, "
            f"alpha = {alpha:.6g}): smallness margin of the source is too thin"
        )
    u = _slave_origin(u)
    e_final = energy(prob, RadialField(grid, u))
    return CriticalPoint(
        u=RadialField(grid, u),
        energy=e_final.total,
        grad_residual=res,
        kind="minimizer",
        level_estimate=None,
        iterations=iterations,
        info={"energy_history": history, "norm": norm_u, "alpha": alpha},
    )


# --- endpoints -----------------------------------------------------------------


def find_endpoint(
    prob: Problem,
    mu_min: float = 0.5,
    mode: str = "scaling",
    cut: CutoffSpec | None = None,
    margin: float = 1.15,
) -> RadialField:
    """A field e with negative energy for the relevant functional family.

    scaling: e = w_t with w_t(r) = t^2 w(t r); since the power term grows like
    t^{2p-1} and the quadratic/nonlocal terms like t^3, negativity at mu_min
    (hence for every mu >= mu_min) is reached for p > 2 and t large.

    cutoff_ray: e = t v1 on a fixed unit-norm profile with t >= 2 M0, so the
    truncation factor vanishes at e and the power term dominates.
    """
    from .energy import energy_cutoff, energy_mu  # cycle-free local import

    grid = prob.grid
    if mode == "scaling":
        if prob.p <= 2.0:
            raise ValueError("scaling endpoint requires p > 2")
        w = RadialField(grid, np.exp(-grid.r / 2.0))
        t = 1.0
        from .radial import scale_transform

        for _ in range(80):
            cand = scale_transform(w, t)
            if energy_mu(prob, mu_min, cand).total < 0.0:
                deeper = scale_transform(w, margin * t)
                if energy_mu(prob, mu_min, deeper).total < 0.0:
                    return deeper
                return cand
            t *= 1.3
        raise NonConvergenceError(
            f"scaling endpoint search found no negative energy up to t = {t:.3g}"
        )
    if mode == "cutoff_ray":
        if cut is None:
            raise ValueError("cutoff_ray endpoint requires a CutoffSpec")
        v1 = np.exp(-grid.r**2 / 2.0)
        v1 /= np.sqrt(float(h1_values_sq(grid, v1)))
        t = 2.0 * cut.m0
        for _ in range(80):
            cand = RadialField(grid, t * v1)
            if energy_cutoff(prob, cut, cand).total < 0.0:
                deeper = RadialField(grid, margin * t * v1)
                if energy_cutoff(prob, cut, deeper).total < 0.0:
                    return deeper
                return cand
            t *= 1.5
        raise NonConvergenceError(
            f"cutoff_ray endpoint search found no negative energy up to t = {t:.3g}"
        )
    raise ValueError(f"unknown endpoint mode {mode!r}")


# --- mountain pass -------------------------------------------------------------


def _path_lengths(grid, path: np.ndarray) -> np.ndarray:
    segs = path[1:] - path[:-1]
    return np.sqrt(np.maximum(h1_values_sq(grid, segs), 0.0))


def _redistribute(grid, path: np.ndarray) -> np.ndarray:
    lens = _path_lengths(grid, path)
    cum = np.concatenate([[0.0], np.cumsum(lens)])
    total = cum[-1]
    if total <= 0:
        return path
    k = path.shape[0]
    targets = np.linspace(0.0, total, k)
    idx = np.clip(np.searchsorted(cum, targets, side="right") - 1, 0, k - 2)
    seg_len = np.maximum(cum[idx + 1] - cum[idx], 1e-300)
    theta = (targets - cum[idx]) / seg_len
    new = (1.0 - theta)[:, None] * path[idx] + theta[:, None] * path[idx + 1]
    new[0] = path[0]
    new[-1] = path[-1]
    return new


def _initial_path(grid, e_vals: np.ndarray, k: int, via: np.ndarray | None) -> np.ndarray:
    if via is None:
        t = np.linspace(0.0, 1.0, k)
        return t[:, None] * e_vals
    # polyline 0 -> via -> e, then uniform arclength
    m = max(k, 8)
    t1 = np.linspace(0.0, 1.0, m)[:, None] * via
    t2 = via + np.linspace(0.0, 1.0, m)[:, None] * (e_vals - via)
    fine = np.vstack([t1, t2[1:]])
    coarse = _redistribute(grid, fine)
    # subsample the redistributed fine polyline down to k nodes
    pick = np.linspace(0, coarse.shape[0] - 1, k).round().astype(int)
    path = coarse[pick]
    path[0] = 0.0
    path[-1] = e_vals
    path = _redistribute(grid, path)
    # keep the warm-start point itself in the path: it is typically an
    # (almost) converged maximizer and sampling must not interpolate it away
    j = int(np.argmin(_node_dist(grid, path, via)))
    path[min(max(j, 1), k - 2)] = via
    return path


def mountain_pass(
    functional: Objective,
    endpoint: RadialField,
    cfg: SolverConfig = SolverConfig(),
    via: RadialField | None = None,
    rho_min: float | None = None,
) -> CriticalPoint:
    """Path-deformation search for the inf-max critical point.

    The final path maximum is reported as level_estimate; the converged
    maximizer is returned with its residual measured on the same functional.
    rho_min, when given, guards the mountain ring: the path maximum must stay
    above it and the polished point may not fall below it.
    """
    grid = functional.grid
    k = max(int(cfg.path_nodes), 5)
    e_vals = endpoint.values
    if functional.total(e_vals) >= 0.0:
        raise GeometryError("endpoint does not have negative energy")
    via_vals = via.values if via is not None else None
    path = _initial_path(grid, e_vals, k, via_vals)
    energies = np.asarray(functional.batch_total(path))
    tol = cfg.tol_grad
    step = 1.0
    best_level = np.inf
    stall = 0
    polish_failures = 0
    iterations = 0
    # moving a node further than the node spacing tears the polyline and
    # lets it burn through the ridge node by node; cap each deformation step
    # by a fraction of the mean segment length
    move_cap = 0.75 * float(np.mean(_path_lengths(grid, path)))

    for it in range(cfg.max_iter):
        iterations = it
        m = int(np.argmax(energies))
        if m == 0 or m == k - 1:
            raise GeometryError(
                "path maximum sits at an endpoint; mountain-pass geometry violated"
            )
        level = float(energies[m])
        # node sampling can undershoot the continuum path maximum between
        # nodes, so only a gross collapse (path sliding off the mountain into
        # the ball) is flagged during deformation; the converged level is
        # checked against the ring bound at the end
        if rho_min is not None and level < 0.05 * rho_min:
            raise GeometryError(
                f"path maximum {level:.6g} collapsed below the ring level {rho_min:.6g}"
            )
        data = functional.data(path[m])
        res = residual_norm(grid, data.dual)
        if res <= tol:
            break
        # Newton endgame once deformation has localized the maximizer
        if polish_failures < 8 and (
            res < 0.05 * (1.0 + abs(level)) or stall >= 25
        ):
            cand, cand_res, ok = _newton_refine(functional, path[m], tol, cfg)
            if ok:
                cand_level = functional.total(cand)
                level_ok = cand_level <= level + 0.1 * (1.0 + abs(level))
                ring_ok = rho_min is None or cand_level >= rho_min - 10.0 * tol
                if level_ok and ring_ok:
                    path[m] = cand
                    energies[m] = cand_level
                    res = cand_res
                    break
            polish_failures += 1
            stall = 0
        d = functional.prec.solve(data.dual)
        slope = float(data.dual @ d)
        if slope <= 0:
            stall += 1
            continue
        d_len = float(np.sqrt(max(h1_values_sq(grid, d), 1e-300)))
        s = min(step, move_cap / d_len)
        accepted = False
        for _ in range(40):
            cand = path[m] - s * d
            e_cand = functional.total(cand)
            if np.isfinite(e_cand) and e_cand < level - 1e-4 * s * slope:
                accepted = True
                break
            s *= 0.5
        if accepted:
            path[m] = cand
            energies[m] = e_cand
            step = min(s * 2.0, 4.0)
        else:
            stall += 1
        new_level = float(np.max(energies))
        if new_level > best_level - 1e-12 * (1.0 + abs(best_level)):
            stall += 1
        else:
            stall = 0
            best_level = new_level
        if cfg.redistribute_every and (it + 1) % cfg.redistribute_every == 0:
            hold = path[m].copy()
            path = _redistribute(grid, path)
            # keep the current maximizer in the path so progress is not lost
            j = int(np.argmin(_node_dist(grid, path, hold)))
            j = min(max(j, 1), k - 2)
            path[j] = hold
            energies = np.asarray(functional.batch_total(path))
            move_cap = 0.75 * float(np.mean(_path_lengths(grid, path)))
    else:
        m = int(np.argmax(energies))
        data = functional.data(path[m])
        res = residual_norm(grid, data.dual)
        if res > tol:
            raise NonConvergenceError(
                f"mountain pass: residual {res:.3e} > {tol:.1e} "
                f"after {cfg.max_iter} deformation steps (level {energies[m]:.6g})"
            )

    m = int(np.argmax(energies))
    u = _slave_origin(path[m])
    data = functional.data(u)
    res = residual_norm(grid, data.dual)
    level_estimate = float(np.max(energies))
    if rho_min is not None and level_estimate < rho_min - 10.0 * tol:
        raise GeometryError(
            f"converged level {level_estimate:.6g} sits below the ring level "
            f"{rho_min:.6g}; the found point is not of mountain-pass type"
        )
    nodes = [RadialField(grid, row.copy()) for row in path]
    return CriticalPoint(
        u=RadialField(grid, u),
        energy=functional.total(u),
        grad_residual=res,
        kind="mountain_pass",
        level_estimate=level_estimate,
        iterations=iterations,
        info={
            "path": MountainPassPath(nodes=nodes, energies=energies.copy(), max_index=m),
            "mu": functional.mu,
            "cutoff_m0": functional.cut.m0 if functional.cut else None,
        },
    )


def _node_dist(grid, path: np.ndarray, ref: np.ndarray) -> np.ndarray:
    return np.sqrt(np.maximum(h1_values_sq(grid, path - ref[None, :]), 0.0))


# --- continuation and the two-solution driver ----------------------------------


def mu_continuation(
    prob: Problem,
    mu_grid: np.ndarray,
    endpoint: RadialField,
    cfg: SolverConfig = SolverConfig(),
    geo: GeometryConstants | None = None,
) -> list[CriticalPoint]:
    """Mountain pass along an increasing mu grid ending at 1, warm-started.

    The returned sequence carries one critical point per mu; the last entry
    solves the original system.
    """
    mu_grid = np.asarray(mu_grid, dtype=float)
    if mu_grid.ndim != 1 or len(mu_grid) < 1:
        raise ValueError("mu_grid must be a non-empty 1-d sequence")
    if np.any(np.diff(mu_grid) <= 0):
        raise ValueError("mu_grid must be strictly increasing")
    if not (0.5 <= mu_grid[0] and abs(mu_grid[-1] - 1.0) < 1e-12):
        raise ValueError("mu_grid must lie in [1/2, 1] and end at 1")
    rho_min = geo.rho if geo is not None else None
    out: list[CriticalPoint] = []
    prev: RadialField | None = None
    for j, mu in enumerate(mu_grid):
        functional = mu_family_functional(prob, float(mu))
        try:
            cp = mountain_pass(functional, endpoint, cfg, via=prev, rho_min=rho_min)
        except (NonConvergenceError, GeometryError) as err:
            raise NonConvergenceError(
                f"mu-continuation stage {j} (mu = {mu:.4f}) failed: {err}"
            ) from err
        out.append(cp)
        prev = cp.u
    return out


def _certified_plain_point(prob: Problem, cp: CriticalPoint, tol: float) -> CriticalPoint:
    """Re-express a critical point of a variant functional as one of the plain
    functional (valid on the cut-off plateau / at mu = 1)."""
    brk = energy(prob, cp.u)
    res = residual_norm(prob.grid, GradientData(prob, cp.u.values).dual)
    return replace(cp, energy=brk.total, grad_residual=res)


def solve_two_solutions(
    prob: Problem,
    cfg: SolverConfig = SolverConfig(),
    geo: GeometryConstants | None = None,
) -> tuple[CriticalPoint, CriticalPoint]:
    """The pair (u0, u1) with energy(u0) < 0 < energy(u1).

    Hypotheses: g >= 0, g not identically zero, |g|_2 < C_p.  For p in (2,5)
    u1 comes from mu-continuation; for p in (1,2] from the cut-off route with
    truncation radius M0 = 4 ||u_trial|| (or the configured override), where
    the trial run uses the generous radius 2 S^{(p+1)/(p-1)}.  Certification
    of u1 requires ||u1|| <= M0 (plateau, hence a genuine critical point);
    the small-coupling regime marker lam < M0^{-3} is recorded alongside.
    """
    g = prob.g
    if np.any(g.values < 0):
        raise ValueError("hypothesis (G1) requires a nonnegative source g")
    if not np.any(g.values > 0):
        raise ValueError("hypothesis (G1) requires g not identically zero")
    if geo is None:
        s = sobolev_constant(prob.p, prob.grid, seed=cfg.seed)
        geo = geometry_constants(prob.p, s, lp_norm(g, 2))
    if not geo.satisfies_g3:
        raise ValueError(
            f"hypothesis (G3) violated: |g|_2 = {geo.g_l2:.6g} >= C_p = {geo.c_p:.6g}"
        )

    u0 = local_minimizer(prob, geo, cfg)
    info: dict = {"s": geo.s, "c_p": geo.c_p, "alpha": geo.alpha, "rho": geo.rho}

    if prob.p > 2.0:
        endpoint = find_endpoint(prob, 0.5, "scaling")
        mu_grid = np.linspace(0.5, 1.0, cfg.mu_points)
        seq = mu_continuation(prob, mu_grid, endpoint, cfg, geo=geo)
        u1 = seq[-1]
        info.update(
            route="mu_continuation",
            mu_grid=list(map(float, mu_grid)),
            levels=[cp.level_estimate for cp in seq],
        )
    else:
        trial_point = None
        trial_norm = None
        if cfg.cutoff_m0 is not None:
            m0 = float(cfg.cutoff_m0)
        else:
            m_generous = 2.0 * geo.s ** ((prob.p + 1.0) / (prob.p - 1.0))
            cut_trial = CutoffSpec(m_generous)
            e_trial = find_endpoint(prob, 1.0, "cutoff_ray", cut=cut_trial)
            trial = mountain_pass(
                cutoff_functional(prob, cut_trial), e_trial, cfg, rho_min=geo.rho
            )
            trial_point = trial.u
            trial_norm = float(np.sqrt(h1_values_sq(prob.grid, trial.u.values)))
            m0 = 4.0 * trial_norm
        lambda_gate = prob.lam < m0 ** (-3.0)
        cut = CutoffSpec(m0)
        e = find_endpoint(prob, 1.0, "cutoff_ray", cut=cut)
        u1 = mountain_pass(
            cutoff_functional(prob, cut), e, cfg, via=trial_point, rho_min=geo.rho
        )
        norm_u1 = float(np.sqrt(h1_values_sq(prob.grid, u1.u.values)))
        info.update(
            route="cutoff",
            m0=m0,
            trial_norm=trial_norm,
            lambda_gate=bool(lambda_gate),
            norm_u1=norm_u1,
        )
        if norm_u1 > m0:
            raise CertificationError(
                f"cut-off route found ||u1|| = {norm_u1:.6g} > M0 = {m0:.6g}: "
                f"the truncated critical point is not certified as a solution; "
                f"lower the coupling lam"
            )
        u1 = _certified_plain_point(prob, u1, cfg.tol_grad)

    u1 = replace(u1, info={**u1.info, **info})
    if not (u0.energy < 0.0 < u1.energy):
        raise GeometryError(
            f"energy ordering violated: I(u0) = {u0.energy:.6g}, I(u1) = {u1.energy:.6g}"
        )
    return u0, u1
