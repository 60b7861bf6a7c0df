"""Command-line interface.

    polyshock closure|shock|sweep|verify --config <path> [--plot] [--out <dir>]

Exit codes: 0 ok, 2 config error, 3 solver error, 4 verification failure.
Solver failures carry a machine-readable kind tag on stderr:
error[no-subshock], error[sonic-singularity], error[non-convergence].
"""

from __future__ import annotations

import argparse
import csv
import itertools
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import closure, oracle, report, shock, verify
from .config import RunConfig, load_config
from .errors import (
    AdmissibilityError,
    ConfigError,
    ConvergenceError,
    NoSubshockError,
    PolyshockError,
    ProfileError,
    SonicSingularityError,
)
from .gas import MacroState6

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_SOLVER = 3
EXIT_VERIFY = 4

_ERROR_KINDS = (
    (NoSubshockError, "no-subshock"),
    (SonicSingularityError, "sonic-singularity"),
    (ProfileError, "non-convergence"),
    (ConvergenceError, "non-convergence"),
)


def _g(x: float) -> str:
    return f"{x:.10g}"


def _quad_spec(cfg: RunConfig) -> oracle.QuadSpec:
    return oracle.QuadSpec(
        rel_tol=cfg.quad_rel_tol,
        abs_floor=cfg.quad_abs_floor,
        max_subdivisions=cfg.max_subdivisions,
        radial_cutoff_sigmas=cfg.radial_cutoff_sigmas,
    )


def run_closure(cfg: RunConfig, out: Path, plot: bool) -> int:
    params = cfg.gas_parameters()
    state = MacroState6(rho=cfg.rho, e=cfg.e, params=params, Pi=cfg.Pi)
    xsec = cfg.cross_section()
    ev = closure.evaluate(state, xsec)
    mult = closure.multipliers(state)
    rows = [
        ("pressure", state.pressure),
        ("temperature", state.temperature),
        ("sum_p", state.sum_p),
        ("lambda0", mult.lambda0),
        ("lambda2", mult.lambda2),
        ("mu2", mult.mu2),
        ("h5", ev.h5),
        ("h6", ev.h6),
        ("kappa", ev.kappa),
        ("production", ev.source),
        ("production_linearized", ev.source_linearized),
        ("tau_pi", ev.tau_pi),
        ("production_et", closure.production_ET(state, ev.tau_pi)),
        ("entropy_production", ev.entropy_prod),
    ]
    path = report.write_closure_csv(rows, out / "closure.csv")
    print(f"wrote {path}")
    for name, value in rows:
        print(f"{name:>22s} = {value:.12g}")
    if plot:
        fig = report.plot_closure(state, xsec, out / "closure.svg")
        print(f"wrote {fig}")
    return EXIT_OK


def _shock_problem(cfg: RunConfig, mach0: float, alpha: float,
                   s: float, q: float, beta: float) -> shock.ShockProblem:
    s_star = s + q if cfg.variant == "generalized" else s
    alpha_star = alpha - beta / 2.0 if cfg.variant == "generalized" else alpha
    return shock.ShockProblem(
        mach0=mach0, alpha=alpha, s_star=s_star, alpha_star=alpha_star,
        ode_rtol=cfg.ode_rtol, eps_eq=cfg.eps_eq,
        max_span=cfg.max_span, n_samples=cfg.n_samples,
    )


def _solve(problem: shock.ShockProblem) -> shock.ShockProfile:
    if problem.mach0 > shock.critical_mach(problem.alpha):
        profile = shock.solve_subshock(problem)
    else:
        profile = shock.solve_continuous(problem)
    return shock.normalize_profile(profile)


def _profile_name(mach0: float, alpha: float, s: float, q: float, beta: float) -> str:
    return f"profile_M0={_g(mach0)}_alpha={_g(alpha)}_s={_g(s)}_q={_g(q)}_beta={_g(beta)}.csv"


def run_shock(cfg: RunConfig, out: Path, plot: bool) -> int:
    mach0 = cfg.scalar("mach0")
    alpha = cfg.scalar("alpha")
    s, q, beta = cfg.scalar("s"), cfg.scalar("q"), cfg.scalar("beta")
    problem = _shock_problem(cfg, mach0, alpha, s, q, beta)
    profile = _solve(problem)
    path = report.write_profile_csv(profile, out / _profile_name(mach0, alpha, s, q, beta))
    print(f"wrote {path}")
    if profile.subshock is not None:
        st = profile.subshock
        print(f"sub-shock at xi=0: rho={st.rho:.8g} u={st.u:.8g} T={st.T:.8g} Pi={st.Pi:.8g}")
    print(f"thickness = {shock.thickness(profile):.8g}")
    if plot:
        fig = report.plot_profile(profile, path.with_suffix(".svg"))
        print(f"wrote {fig}")
    return EXIT_OK


SUMMARY_COLUMNS = ("mach0", "alpha", "s", "q", "beta", "subshock", "Pi_S",
                   "thickness", "max_abs_Pi", "status", "file")


def _sweep_point(args):
    """Solve and serialize one grid point; runs in a worker process.

    Each point writes only its own file, so no output is shared; failures
    come back as status rows instead of exceptions.
    """
    cfg, out_dir, mach0, alpha, s, q, beta = args
    name = _profile_name(mach0, alpha, s, q, beta)
    coords = [_g(mach0), _g(alpha), _g(s), _g(q), _g(beta)]
    try:
        problem = _shock_problem(cfg, mach0, alpha, s, q, beta)
        profile = _solve(problem)
        report.write_profile_csv(profile, Path(out_dir) / name)
        sub = profile.subshock
        row = coords + [
            "1" if sub is not None else "0",
            _g(sub.Pi) if sub is not None else "",
            _g(shock.thickness(profile)),
            _g(float(np.max(np.abs(profile.Pi)))),
            "ok", name,
        ]
        label = f"M0={_g(mach0)} a={_g(alpha)} s={_g(s)} q={_g(q)} b={_g(beta)}"
        return row, (label, profile), None
    except PolyshockError as exc:
        kind = _error_kind(exc)
        return coords + ["", "", "", "", f"error:{kind}", ""], None, f"error[{kind}]: {exc}"


def run_sweep(cfg: RunConfig, out: Path, plot: bool) -> int:
    grid = list(itertools.product(cfg.mach0, cfg.alpha, cfg.s, cfg.q, cfg.beta))
    out.mkdir(parents=True, exist_ok=True)
    tasks = [(cfg, str(out), *point) for point in grid]
    # points are independent and deterministic; run them concurrently when
    # the grid is large enough to amortize the worker startup
    if len(tasks) > 4:
        with ProcessPoolExecutor(max_workers=min(len(tasks), os.cpu_count() or 1)) as pool:
            outcomes = list(pool.map(_sweep_point, tasks))
    else:
        outcomes = [_sweep_point(t) for t in tasks]
    rows = []
    overlays = []
    for (row, overlay, error), point in zip(outcomes, grid):
        rows.append(row)
        if overlay is not None:
            overlays.append(overlay)
        if error is not None:
            print(f"point {[_g(v) for v in point]}: {error}", file=sys.stderr)
    summary = out / "summary.csv"
    with open(summary, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(SUMMARY_COLUMNS)
        writer.writerows(rows)
    print(f"wrote {summary} ({len(rows)} points)")
    if plot and overlays:
        fig = report.plot_profiles(overlays, out / "sweep.svg")
        print(f"wrote {fig}")
    return EXIT_OK


def run_verify(cfg: RunConfig, out: Path, plot: bool) -> int:
    results = verify.run_all(
        alpha=cfg.scalar("alpha"),
        quad=_quad_spec(cfg),
        perturb=cfg.perturb_coefficients,
    )
    out.mkdir(parents=True, exist_ok=True)
    table = out / "verify.csv"
    with open(table, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(("suite", "check", "status", "achieved", "required"))
        for r in results:
            writer.writerow((r.suite, r.name, "pass" if r.passed else "FAIL",
                             f"{r.achieved:.6g}", f"{r.required:.6g}"))
    failures = [r for r in results if not r.passed]
    for suite in verify.SUITES:
        in_suite = [r for r in results if r.suite == suite]
        if not in_suite:
            continue
        bad = sum(1 for r in in_suite if not r.passed)
        mark = "pass" if bad == 0 else f"FAIL ({bad}/{len(in_suite)})"
        print(f"{suite:>18s}: {mark}")
    for r in failures:
        print(f"FAIL {r.suite}/{r.name}: achieved {r.achieved:.6g} "
              f"(required <= {r.required:.6g})", file=sys.stderr)
    print(f"wrote {table}")
    if failures:
        print(f"{len(failures)} of {len(results)} checks failed", file=sys.stderr)
        return EXIT_VERIFY
    print(f"all {len(results)} checks passed")
    return EXIT_OK


def _error_kind(exc: Exception) -> str:
    for klass, kind in _ERROR_KINDS:
        if isinstance(exc, klass):
            return kind
    return "solver"


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="polyshock",
        description="Six-field polyatomic gas model: closure evaluation, "
                    "shock profiles, parameter sweeps, and the oracle suite.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, helptext in (
        ("closure", "evaluate all closed forms at one state"),
        ("shock", "compute a single shock profile"),
        ("sweep", "compute profiles over a parameter grid"),
        ("verify", "run every closed form against its numerical oracle"),
    ):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--config", required=True, help="path to key = value config file")
        p.add_argument("--plot", action="store_true", help="also render SVG figures")
        p.add_argument("--out", default=None, help="output directory (default from config)")
    args = parser.parse_args(argv)

    try:
        cfg = load_config(args.config, command=args.command)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    out = Path(args.out) if args.out is not None else Path(cfg.out)
    plot = bool(args.plot or cfg.plot)
    runner = {"closure": run_closure, "shock": run_shock,
              "sweep": run_sweep, "verify": run_verify}[args.command]
    try:
        return runner(cfg, out, plot)
    except (NoSubshockError, SonicSingularityError, ProfileError, ConvergenceError) as exc:
        print(f"error[{_error_kind(exc)}]: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except (ConfigError, AdmissibilityError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except PolyshockError as exc:
        print(f"error[{_error_kind(exc)}]: {exc}", file=sys.stderr)
        return EXIT_SOLVER


if __name__ == "__main__":
    sys.exit(main())
