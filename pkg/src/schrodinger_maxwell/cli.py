"""Config-driven front end.

A run is described by a plain-text key=value document (one key per line,
`#` starts a comment):

    mode = solve            # solve | sweep | verify | sobolev
    p = 3.0
    lambda = 1.0
    g_family = exponential  # or gaussian
    g_l2_target = 0.5*C_p   # fraction of C_p, or a plain number (absolute)
    r_max = 20.0
    n = 2048
    tol_grad = 1e-6
    max_iter = 20000
    path_nodes = 41
    mu_points = 11
    seed = 0
    # cutoff_m0 = 30.0      # optional override of the truncation radius
    # lambda_list = 1e-3,1e-2,0.1,1,10,100   (sweep mode)

Outputs: solve writes result.json and profiles.csv; sweep writes sweep.csv;
verify runs the invariant suite and prints a pass/fail summary; sobolev
prints the geometry constants.  Exit codes: 0 success, 1 config error,
2 solver non-convergence, 3 invariant-suite failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .diagnostics import identity_report, nonexistence_scan, theorem_41_bound
from .energy import Problem, geometry_constants, sobolev_constant
from .poisson import newtonian_potential
from .profiles import G_FAMILIES, make_source
from .radial import RadialField, lp_norm, make_grid
from .solvers import (
    CertificationError,
    GeometryError,
    NonConvergenceError,
    SolverConfig,
    solve_two_solutions,
)

__all__ = ["RunConfig", "ConfigError", "parse_config", "run", "main"]

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_SOLVER = 2
EXIT_VERIFY = 3

MODES = ("solve", "sweep", "verify", "sobolev")


class ConfigError(ValueError):
    """Malformed or out-of-range configuration."""


@dataclass
class RunConfig:
    mode: str
    p: float | None = None
    lam: float | None = None
    g_family: str | None = None
    g_l2_target: float | None = None
    g_l2_is_fraction: bool = False
    r_max: float = 20.0
    n: int = 2048
    tol_grad: float = 1e-6
    max_iter: int = 20000
    path_nodes: int = 41
    mu_points: int = 11
    seed: int = 0
    cutoff_m0: float | None = None
    lambda_list: list[float] = field(default_factory=list)

    def solver_config(self) -> SolverConfig:
        return SolverConfig(
            tol_grad=self.tol_grad,
            max_iter=self.max_iter,
            path_nodes=self.path_nodes,
            mu_points=self.mu_points,
            seed=self.seed,
            cutoff_m0=self.cutoff_m0,
        )


def _parse_float(raw: str, key: str, line_no: int) -> float:
    try:
        return float(raw)
    except ValueError:
        raise ConfigError(f"line {line_no}: key '{key}' expects a number, got {raw!r}")


def _parse_int(raw: str, key: str, line_no: int) -> int:
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"line {line_no}: key '{key}' expects an integer, got {raw!r}")


def parse_config(text: str) -> RunConfig:
    """Parse and validate a key=value configuration document."""
    seen: dict[str, tuple[str, int]] = {}
    for line_no, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigError(f"line {line_no}: expected key = value, got {line.strip()!r}")
        key, raw = (part.strip() for part in stripped.split("=", 1))
        if key in seen:
            raise ConfigError(f"line {line_no}: duplicate key '{key}'")
        seen[key] = (raw, line_no)

    known = {
        "mode", "p", "lambda", "g_family", "g_l2_target", "r_max", "n",
        "tol_grad", "max_iter", "path_nodes", "mu_points", "seed",
        "cutoff_m0", "lambda_list",
    }
    for key, (_, line_no) in seen.items():
        if key not in known:
            raise ConfigError(f"line {line_no}: unknown key '{key}'")

    if "mode" not in seen:
        raise ConfigError("missing required key 'mode'")
    mode, mode_line = seen["mode"]
    if mode not in MODES:
        raise ConfigError(
            f"line {mode_line}: mode must be one of {', '.join(MODES)}, got {mode!r}"
        )
    cfg = RunConfig(mode=mode)

    if "p" in seen:
        raw, ln = seen["p"]
        cfg.p = _parse_float(raw, "p", ln)
        if not 1.0 < cfg.p < 5.0:
            raise ConfigError(f"line {ln}: p must lie in the open interval (1, 5), got {cfg.p}")
    if "lambda" in seen:
        raw, ln = seen["lambda"]
        cfg.lam = _parse_float(raw, "lambda", ln)
        if cfg.lam < 0:
            raise ConfigError(f"line {ln}: lambda must be >= 0, got {cfg.lam}")
    if "g_family" in seen:
        raw, ln = seen["g_family"]
        if raw not in G_FAMILIES:
            raise ConfigError(
                f"line {ln}: g_family must be one of {', '.join(G_FAMILIES)}, got {raw!r}"
            )
        cfg.g_family = raw
    if "g_l2_target" in seen:
        raw, ln = seen["g_l2_target"]
        lowered = raw.lower().replace(" ", "")
        if lowered.endswith("*c_p") or lowered.endswith("*cp"):
            frac = _parse_float(lowered.rsplit("*", 1)[0], "g_l2_target", ln)
            if not 0.0 <= frac < 1.0:
                raise ConfigError(
                    f"line {ln}: g_l2_target fraction {frac} violates hypothesis (G3); "
                    f"|g|_2 < C_p requires the fraction to lie in [0, 1)"
                )
            cfg.g_l2_target = frac
            cfg.g_l2_is_fraction = True
        else:
            cfg.g_l2_target = _parse_float(raw, "g_l2_target", ln)
            if cfg.g_l2_target < 0:
                raise ConfigError(f"line {ln}: g_l2_target must be >= 0")
    if "r_max" in seen:
        raw, ln = seen["r_max"]
        cfg.r_max = _parse_float(raw, "r_max", ln)
        if cfg.r_max <= 0:
            raise ConfigError(f"line {ln}: r_max must be positive")
    if "n" in seen:
        raw, ln = seen["n"]
        cfg.n = _parse_int(raw, "n", ln)
        if cfg.n < 16:
            raise ConfigError(f"line {ln}: n must be at least 16")
    if "tol_grad" in seen:
        raw, ln = seen["tol_grad"]
        cfg.tol_grad = _parse_float(raw, "tol_grad", ln)
        if cfg.tol_grad <= 0:
            raise ConfigError(f"line {ln}: tol_grad must be positive")
    if "max_iter" in seen:
        raw, ln = seen["max_iter"]
        cfg.max_iter = _parse_int(raw, "max_iter", ln)
        if cfg.max_iter < 1:
            raise ConfigError(f"line {ln}: max_iter must be >= 1")
    if "path_nodes" in seen:
        raw, ln = seen["path_nodes"]
        cfg.path_nodes = _parse_int(raw, "path_nodes", ln)
        if cfg.path_nodes < 5:
            raise ConfigError(f"line {ln}: path_nodes must be >= 5")
    if "mu_points" in seen:
        raw, ln = seen["mu_points"]
        cfg.mu_points = _parse_int(raw, "mu_points", ln)
        if cfg.mu_points < 2:
            raise ConfigError(f"line {ln}: mu_points must be >= 2")
    if "seed" in seen:
        raw, ln = seen["seed"]
        cfg.seed = _parse_int(raw, "seed", ln)
    if "cutoff_m0" in seen:
        raw, ln = seen["cutoff_m0"]
        cfg.cutoff_m0 = _parse_float(raw, "cutoff_m0", ln)
        if cfg.cutoff_m0 <= 0:
            raise ConfigError(f"line {ln}: cutoff_m0 must be positive")
    if "lambda_list" in seen:
        raw, ln = seen["lambda_list"]
        try:
            values = [float(tok) for tok in raw.split(",") if tok.strip()]
        except ValueError:
            raise ConfigError(f"line {ln}: lambda_list expects comma-separated numbers")
        if len(values) < 2 or any(b <= a for a, b in zip(values, values[1:])):
            raise ConfigError(f"line {ln}: lambda_list must be increasing with >= 2 entries")
        cfg.lambda_list = values

    required = {
        "solve": ("p", "lam", "g_family", "g_l2_target"),
        "sweep": ("p", "g_family", "g_l2_target", "lambda_list"),
        "sobolev": ("p", "g_family", "g_l2_target"),
        "verify": (),
    }[mode]
    names = {"lam": "lambda", "lambda_list": "lambda_list"}
    for attr in required:
        value = getattr(cfg, attr)
        if value is None or (attr == "lambda_list" and not value):
            raise ConfigError(f"mode '{mode}' requires key '{names.get(attr, attr)}'")
    return cfg


def _resolve_problem(cfg: RunConfig, lam: float | None = None):
    """Build (problem, geometry) from the config; the Sobolev constant is
    estimated on the configured grid so hypothesis (G3) is checked against
    the discrete threshold."""
    grid = make_grid(cfg.r_max, cfg.n)
    s = sobolev_constant(cfg.p, grid, seed=cfg.seed)
    c_p = geometry_constants(cfg.p, s, 0.0).c_p
    target = cfg.g_l2_target * c_p if cfg.g_l2_is_fraction else cfg.g_l2_target
    g = make_source(grid, cfg.g_family, target)
    geo = geometry_constants(cfg.p, s, lp_norm(g, 2))
    if not geo.satisfies_g3:
        raise ConfigError(
            f"hypothesis (G3) violated: |g|_2 = {geo.g_l2:.6g} >= C_p = {geo.c_p:.6g}"
        )
    lam_eff = cfg.lam if lam is None else lam
    prob = Problem(lam=float(lam_eff), p=cfg.p, g=g)
    return prob, geo


def _json_ready(value):
    if isinstance(value, (np.floating, np.integer)):
        return float(value)
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, dict):
        return {k: _json_ready(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_ready(v) for v in value]
    return value


def _write_json(path: Path, payload: dict) -> None:
    path.write_text(
        json.dumps(_json_ready(payload), indent=2, sort_keys=True) + "\n",
        encoding="utf-8",
    )


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        return repr(x)
    return str(x)


def _write_csv(path: Path, header: list[str], rows: list[list]) -> None:
    lines = [",".join(header)]
    lines += [",".join(_fmt(x) for x in row) for row in rows]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def _run_solve(cfg: RunConfig, out_dir: Path) -> int:
    from .radial import h1_norm_sq

    prob, geo = _resolve_problem(cfg)
    solver_cfg = cfg.solver_config()
    u0, u1 = solve_two_solutions(prob, solver_cfg, geo=geo)
    rep0 = identity_report(prob, 1.0, u0.u)
    rep1 = identity_report(prob, 1.0, u1.u)
    result = {
        "mode": "solve",
        "lambda": prob.lam,
        "p": prob.p,
        "g_family": cfg.g_family,
        "g_l2": geo.g_l2,
        "s_constant": geo.s,
        "c_p": geo.c_p,
        "alpha": geo.alpha,
        "rho": geo.rho,
        "r_max": cfg.r_max,
        "n": cfg.n,
        "seed": cfg.seed,
        "route": u1.info.get("route"),
        "m0": u1.info.get("m0"),
        "lambda_gate": u1.info.get("lambda_gate"),
        "levels": u1.info.get("levels"),
        "energy_u0": u0.energy,
        "energy_u1": u1.energy,
        "level_estimate_u1": u1.level_estimate,
        "norm_u0": u0.info.get("norm"),
        "grad_residual_u0": u0.grad_residual,
        "grad_residual_u1": u1.grad_residual,
        "iterations_u0": u0.iterations,
        "iterations_u1": u1.iterations,
        "pohozaev_rel_u0": rep0.pohozaev_relative,
        "pohozaev_rel_u1": rep1.pohozaev_relative,
        "nehari_u0": rep0.nehari_residual,
        "nehari_u1": rep1.nehari_residual,
        "decomposition_u0": rep0.decomposition_residual,
        "decomposition_u1": rep1.decomposition_residual,
        "norm_u1": float(np.sqrt(h1_norm_sq(u1.u))),
    }
    _write_json(out_dir / "result.json", result)
    phi0 = newtonian_potential(u0.u)
    phi1 = newtonian_potential(u1.u)
    rows = [
        [float(r), float(a), float(b), float(c), float(d)]
        for r, a, b, c, d in zip(
            prob.grid.r, u0.u.values, u1.u.values, phi0.values, phi1.values
        )
    ]
    _write_csv(out_dir / "profiles.csv", ["r", "u0", "u1", "phi_u0", "phi_u1"], rows)
    print(
        f"solve: I(u0) = {u0.energy:.8g} < 0 < I(u1) = {u1.energy:.8g}; "
        f"residuals {u0.grad_residual:.2e}, {u1.grad_residual:.2e}"
    )
    return EXIT_OK


def _run_sweep(cfg: RunConfig, out_dir: Path) -> int:
    prob, geo = _resolve_problem(cfg, lam=cfg.lambda_list[0])
    records, summary = nonexistence_scan(
        prob, cfg.lambda_list, cfg.solver_config()
    )
    header = [
        "lambda", "certified", "energy_u0", "energy_u1", "norm_u1", "m0",
        "lambda_gate", "bound41_negative_u0", "bound41_negative_u1", "error",
    ]
    rows = []
    for rec in records:
        bounds = rec.get("bounds", {})
        rows.append([
            rec["lambda"],
            rec["certified"],
            rec.get("energy_u0"),
            rec.get("energy_u1"),
            rec.get("u1").info.get("norm_u1") if rec.get("u1") else None,
            rec.get("m0"),
            rec.get("lambda_gate"),
            bounds.get("u0", {}).get("bound_sign_negative"),
            bounds.get("u1", {}).get("bound_sign_negative"),
            (rec.get("error") or "").replace(",", ";").replace("\n", " "),
        ])
    _write_csv(out_dir / "sweep.csv", header, rows)
    n_cert = sum(1 for r in records if r["certified"])
    print(
        f"sweep: {n_cert}/{len(records)} couplings certified; "
        f"first failure at lambda = {summary['first_failure_lambda']}; "
        f"monotone presentation: {summary['monotone_presentation']}"
    )
    return EXIT_OK


def _run_sobolev(cfg: RunConfig) -> int:
    prob, geo = _resolve_problem(cfg, lam=cfg.lam if cfg.lam is not None else 0.0)
    print(f"p = {cfg.p}, grid: r_max = {cfg.r_max}, n = {cfg.n}")
    print(f"S     = {geo.s:.10g}")
    print(f"C_p   = {geo.c_p:.10g}")
    print(f"alpha = {geo.alpha:.10g}")
    print(f"rho   = {geo.rho:.10g}   (|g|_2 = {geo.g_l2:.10g})")
    return EXIT_OK


def _run_verify(cfg: RunConfig) -> int:
    from .verification import run_verification

    results = run_verification(seed=cfg.seed)
    failures = 0
    for name, passed, detail in results:
        status = "pass" if passed else "FAIL"
        print(f"[{status}] {name}: {detail}")
        failures += 0 if passed else 1
    print(f"{failures} failures out of {len(results)} checks")
    return EXIT_OK if failures == 0 else EXIT_VERIFY


def run(cfg: RunConfig, out_dir: str | Path = ".") -> int:
    """Execute a parsed configuration; returns the process exit status."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    try:
        if cfg.mode == "solve":
            return _run_solve(cfg, out)
        if cfg.mode == "sweep":
            return _run_sweep(cfg, out)
        if cfg.mode == "sobolev":
            return _run_sobolev(cfg)
        if cfg.mode == "verify":
            return _run_verify(cfg)
        raise ConfigError(f"unknown mode {cfg.mode!r}")
    except ConfigError:
        raise
    except (NonConvergenceError, GeometryError, CertificationError) as err:
        print(f"solver error: {err}", file=sys.stderr)
        return EXIT_SOLVER
    except ValueError as err:
        # hypothesis violations ((G1), (G3)) surface as config-level faults
        print(f"config error: {err}", file=sys.stderr)
        return EXIT_CONFIG


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="schrodinger-maxwell",
        description="Solve / sweep / verify the radial Schrodinger-Maxwell system "
        "from a key=value config file.",
    )
    parser.add_argument("config", help="path to the configuration document")
    parser.add_argument(
        "--out-dir", default=".", help="directory for result.json / *.csv outputs"
    )
    args = parser.parse_args(argv)
    try:
        text = Path(args.config).read_text(encoding="utf-8")
    except OSError as err:
        print(f"config error: cannot read {args.config}: {err}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        cfg = parse_config(text)
        return run(cfg, args.out_dir)
    except ConfigError as err:
        print(f"config error: {err}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    raise SystemExit(main())
