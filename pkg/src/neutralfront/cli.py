"""Command-line front end.

Subcommands wrap the library one-to-one (roots, curves, solve, validate,
evolve); numeric output is printed with 17 significant digits so that values
round-trip exactly and reruns are byte-identical.  Reports are one
``key = value`` pair per line; sweeps and histories are CSV.

Exit codes: 0 success, 1 numeric failure, 2 validation error.
"""

import argparse
import sys
from typing import List, Optional

import numpy as np

from . import curves as curves_mod
from . import evolver, solver, spectral
from .gridops import make_config, read_profile, write_profile
from .params import DomainError, ModelParams, NumericsError
from .solver import SolveOptions


def _fmt(x) -> str:
    return f"{float(x):.17g}"


def _emit(key: str, value) -> None:
    if isinstance(value, float):
        value = _fmt(value)
    print(f"{key} = {value}")


# ---------------------------------------------------------------------------
# roots


def cmd_roots(args) -> int:
    p = ModelParams(b=args.b, tau=args.tau, c=args.c)
    roots = spectral.find_roots(p)
    fields = [
        ("b", p.b),
        ("tau", p.tau),
        ("c", p.c),
        ("has_chi0_roots", roots.has_chi0_roots),
        ("has_chi1_roots", roots.has_chi1_roots),
        ("critical_chi0", roots.critical_chi0),
        ("critical_chi1", roots.critical_chi1),
    ]
    for name, val, fn in (
        ("lambda1", roots.lambda1, spectral.chi0),
        ("lambda2", roots.lambda2, spectral.chi0),
        ("mu1", roots.mu1, spectral.chi1),
        ("mu2", roots.mu2, spectral.chi1),
    ):
        if val is None:
            fields.append((name, ""))
            fields.append((f"chi_residual_{name}", ""))
        else:
            fields.append((name, val))
            fields.append((f"chi_residual_{name}", fn(val, p)))
    if args.format == "csv":
        print(",".join(k for k, _ in fields))
        print(",".join(_fmt(v) if isinstance(v, float) else str(v) for _, v in fields))
    else:
        for k, v in fields:
            _emit(k, v)
    return 0


# ---------------------------------------------------------------------------
# curves


def cmd_curves(args) -> int:
    if args.samples < 2:
        raise DomainError(f"need at least 2 samples, got {args.samples}")
    if not (0.0 < args.tau_min < args.tau_max):
        raise DomainError("need 0 < tau_min < tau_max")
    taus = np.linspace(args.tau_min, args.tau_max, args.samples)
    lines = [
        f"# b={_fmt(args.b)}",
        f"# curve_tol={_fmt(curves_mod.CURVE_TOL)}",
        f"# tau_critical={_fmt(curves_mod.tau_critical(args.b))}",
        "tau,c_star,lambda_double,c_hash,mu_double",
    ]
    for tau in taus:
        cs = curves_mod.c_star(float(tau), args.b)
        ch = curves_mod.c_hash(float(tau), args.b)
        hash_cols = (_fmt(ch.c), _fmt(ch.double_root)) if ch is not None else ("", "")
        lines.append(
            f"{_fmt(tau)},{_fmt(cs.c)},{_fmt(cs.double_root)},"
            f"{hash_cols[0]},{hash_cols[1]}"
        )
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


# ---------------------------------------------------------------------------
# solve


def cmd_solve(args) -> int:
    p = ModelParams(b=args.b, tau=args.tau, c=args.c)
    verdict = curves_mod.in_domain(p)
    _emit("in_domain", verdict.in_domain)
    _emit("c_star_at_tau", verdict.c_star_at_tau)
    _emit(
        "c_hash_at_tau",
        "" if verdict.c_hash_at_tau is None else _fmt(verdict.c_hash_at_tau),
    )
    _emit("tau_critical", verdict.tau_critical)
    if not verdict.in_domain:
        print("error = (tau, c) outside the existence domain", file=sys.stderr)
        return 2
    opts = SolveOptions(T=args.T, m=args.m, tol=args.tol)
    rep = solver.solve_front(p, opts)
    cfg = make_config(p, m=args.m)

    _emit("lambda2", rep.roots.lambda2)
    _emit("lambda1", rep.roots.lambda1)
    _emit("mu1", rep.roots.mu1)
    _emit("mu2", rep.roots.mu2)
    _emit("iters", rep.iters)
    _emit("converged", rep.converged)
    _emit("delta_final", rep.deltas[-1] if rep.deltas else float("nan"))
    _emit("monotone_defect", rep.monotone_defect)
    _emit("sandwich_defect", rep.sandwich_defect)
    _emit("residual_pew_sup", rep.residual_pew_sup)
    _emit("residual_pe_sup", rep.residual_pe_sup)
    _emit("tail_slope", rep.tail_slope)
    _emit("n1_identity_defect", rep.n1_identity_defect)
    nondecreasing = bool(np.all(np.diff(rep.profile_w.values) >= -1e-12))
    _emit("w_nondecreasing", nondecreasing)

    if args.out:
        for suffix, prof in (("_w.csv", rep.profile_w), ("_u.csv", rep.profile_u)):
            path = args.out + suffix
            with open(path, "w", newline="\n") as fh:
                write_profile(fh, prof, p, cfg)
            _emit("profile" + suffix[:-4], path)
    return 0 if rep.converged and nondecreasing else 1


# ---------------------------------------------------------------------------
# validate


def _check(name: str, value: float, ok: bool, failures: List[str]) -> None:
    _emit(name, value)
    _emit(name + "_check", "pass" if ok else "fail")
    if not ok:
        failures.append(name)


def cmd_validate(args) -> int:
    with open(args.profile) as fh:
        g, p, cfg = read_profile(fh)
    for flag, header in (("b", p.b), ("tau", p.tau), ("c", p.c)):
        given = getattr(args, flag)
        if given is not None and abs(given - header) > 1e-15 * max(1.0, abs(header)):
            raise DomainError(
                f"--{flag} {given} does not match the profile header {flag}={header}"
            )
    failures: List[str] = []
    monotone_defect = float(np.max(np.maximum(-np.diff(g.values), 0.0), initial=0.0))
    _check("monotone_defect", monotone_defect, monotone_defect <= 1e-12, failures)

    pew = solver.residual_pew_sup(g, p, cfg)
    _check("residual_pew_sup", pew, pew <= args.tol_pew, failures)

    u = solver.reconstruct_u(g, p, cfg)
    pe = solver.residual_pe(u, p, cfg)
    _check("residual_pe_sup", pe, pe <= args.tol_pe, failures)

    n1 = solver.n1_identity_check(g, p, cfg)
    _check("n1_identity_defect", n1, n1 <= args.tol_n1, failures)

    roots = spectral.find_roots(p)
    slope = solver.tail_slope(g)
    rel = abs(slope - roots.lambda2) / roots.lambda2
    _emit("tail_slope", slope)
    _check("tail_slope_rel_error", rel, rel <= args.tail_rel, failures)

    _emit("validation", "pass" if not failures else "fail")
    return 0 if not failures else 1


# ---------------------------------------------------------------------------
# evolve


def cmd_evolve(args) -> int:
    with open(args.profile) as fh:
        g, p, _cfg = read_profile(fh)
    result = evolver.evolve(
        g, p, horizon=args.horizon, dx=args.dx, dt_time=args.dt
    )
    _emit("speed_estimate", result.speed_estimate)
    _emit("speed_rel_error", abs(result.speed_estimate + p.c) / p.c)
    _emit("shape_error", result.shape_error)
    _emit("samples", result.times.size)
    if args.out:
        lines = [f"# b={_fmt(p.b)}", f"# tau={_fmt(p.tau)}", f"# c={_fmt(p.c)}",
                 "t,front_position"]
        lines += [
            f"{_fmt(t)},{_fmt(x)}"
            for t, x in zip(result.times, result.front_positions)
        ]
        with open(args.out, "w", newline="\n") as fh:
            fh.write("\n".join(lines) + "\n")
        _emit("front_csv", args.out)
    return 0


# ---------------------------------------------------------------------------
# parser / dispatch


def _add_params(sp, required: bool = True) -> None:
    sp.add_argument("--b", type=float, required=required, default=None)
    sp.add_argument("--tau", type=float, required=required, default=None)
    sp.add_argument("--c", type=float, required=required, default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="neutralfront",
        description="Monotone wavefronts of the neutral KPP-Fisher equation.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("roots", help="characteristic roots at (b, tau, c)")
    _add_params(sp)
    sp.add_argument("--format", choices=("report", "csv"), default="report")
    sp.set_defaults(func=cmd_roots)

    sp = sub.add_parser("curves", help="sweep the critical curves over tau")
    sp.add_argument("--b", type=float, required=True)
    sp.add_argument("--tau-min", type=float, required=True)
    sp.add_argument("--tau-max", type=float, required=True)
    sp.add_argument("--samples", type=int, default=50)
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=cmd_curves)

    sp = sub.add_parser("solve", help="construct the wavefront profile")
    _add_params(sp)
    sp.add_argument("--T", type=float, default=None)
    sp.add_argument("--m", type=int, default=16)
    sp.add_argument("--tol", type=float, default=1e-8)
    sp.add_argument("--out", default=None, help="profile file prefix")
    sp.set_defaults(func=cmd_solve)

    sp = sub.add_parser("validate", help="re-check a stored w-profile")
    sp.add_argument("profile")
    _add_params(sp, required=False)
    sp.add_argument("--tol-pew", type=float, default=1e-3)
    sp.add_argument("--tol-pe", type=float, default=1e-2)
    sp.add_argument("--tol-n1", type=float, default=1e-3)
    sp.add_argument("--tail-rel", type=float, default=0.02)
    sp.set_defaults(func=cmd_validate)

    sp = sub.add_parser("evolve", help="evolve a stored u-profile in the PDE")
    sp.add_argument("profile")
    sp.add_argument("--horizon", type=float, default=10.0)
    sp.add_argument("--dx", type=float, default=0.05)
    sp.add_argument("--dt", type=float, default=None)
    sp.add_argument("--out", default=None, help="front-position CSV path")
    sp.set_defaults(func=cmd_evolve)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except DomainError as exc:
        print(f"error = {exc}", file=sys.stderr)
        return 2
    except NumericsError as exc:
        print(f"error = {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error = {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
