"""Command-line front end.

Exit codes: 0 success, 2 invalid arguments, 3 numeric failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import __version__, bounds as bounds_mod, cauchyinv, knotgen, spectral
from .errors import VandcondError
from .structmat import cv_matrix, dft, dump_matrix, leading_block, vandermonde
from .tables import DEFAULT_SEED, DEFAULT_TRIALS, emit, run_table

DEFAULT_F = complex(math.cos(0.3), math.sin(0.3))


def parse_complex(text: str) -> complex:
    parts = text.split(",")
    if len(parts) == 1:
        return complex(float(parts[0]), 0.0)
    if len(parts) == 2:
        return complex(float(parts[0]), float(parts[1]))
    raise argparse.ArgumentTypeError(f"expected RE or RE,IM, got {text!r}")


def parse_eta_grid(text: str):
    vals = tuple(float(x) for x in text.split(","))
    if not vals:
        raise argparse.ArgumentTypeError("empty eta grid")
    return vals


def _add_knot_source(p: argparse.ArgumentParser, with_knots: bool = True):
    p.add_argument("--gen", choices=["dft", "quasi-cyclic", "van-der-corput",
                                     "single-outlier", "scaled-cluster", "file"])
    p.add_argument("--n", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--rho", type=float)
    p.add_argument("--s-last", type=parse_complex, metavar="RE,IM")
    p.add_argument("--file", metavar="PATH")
    if with_knots:
        p.add_argument("--knots", metavar="PATH")


def _resolve_knots(args, parser) -> knotgen.KnotVector:
    if getattr(args, "knots", None):
        return knotgen.read_knots(args.knots)
    gen = args.gen
    if gen is None:
        parser.error("either --knots PATH or --gen NAME is required")
    if gen == "file":
        if not args.file:
            parser.error("--gen file requires --file PATH")
        return knotgen.read_knots(args.file)
    if args.n is None:
        parser.error(f"--gen {gen} requires --n")
    if gen == "dft":
        return knotgen.roots_of_unity(args.n)
    if gen == "quasi-cyclic":
        return knotgen.quasi_cyclic(args.n)
    if gen == "van-der-corput":
        return knotgen.van_der_corput(args.n)
    if gen == "single-outlier":
        if args.s_last is None:
            parser.error("--gen single-outlier requires --s-last RE,IM")
        return knotgen.single_outlier(args.n, args.s_last)
    if gen == "scaled-cluster":
        if args.k is None or args.rho is None:
            parser.error("--gen scaled-cluster requires --k and --rho")
        return knotgen.scaled_cluster(args.n, args.k, args.rho)
    parser.error(f"unknown generator {gen!r}")


def _cmd_gen_knots(args, parser) -> int:
    kv = _resolve_knots(args, parser)
    if args.out:
        knotgen.write_knots(kv, args.out)
    else:
        sys.stdout.write(f"# {kv.label} n={len(kv)}\n")
        for z in kv:
            sys.stdout.write(f"{z.real:.17g},{z.imag:.17g}\n")
    return 0


def _cmd_cond(args, parser) -> int:
    kv = _resolve_knots(args, parser)
    M = vandermonde(kv)
    if args.block:
        M = leading_block(M, args.block)
    s = spectral.singular_values(M)
    print("n,sigma1,sigma_min,kappa,log10kappa,trustworthy")
    print(f"{M.rows},{s.sigma1:.17g},{s.sigma_min:.17g},{s.kappa:.17g},"
          f"{s.log10kappa:.17g},{str(s.trustworthy).lower()}")
    return 0


def _print_entries(mat_or_logs, log_domain: bool) -> None:
    if log_domain:
        mag, ph = mat_or_logs
        print("i,j,log10mag,phase")
        n, m = mag.shape
        for i in range(n):
            for j in range(m):
                print(f"{i},{j},{mag[i, j]:.17g},{ph[i, j]:.17g}")
    else:
        data = mat_or_logs
        print("i,j,re,im")
        n, m = data.shape
        for i in range(n):
            for j in range(m):
                z = data[i, j]
                print(f"{i},{j},{z.real:.17g},{z.imag:.17g}")


def _cmd_invert(args, parser) -> int:
    kv = _resolve_knots(args, parser)
    variant = cauchyinv.InverseVariant(args.variant)
    f = args.f if args.f is not None else DEFAULT_F
    if args.method == "lagrange":
        data = cauchyinv.vandermonde_inverse_lagrange(kv).data
        if args.log_domain:
            with np.errstate(divide="ignore"):
                _print_entries((np.log10(np.abs(data)), np.angle(data)), True)
        else:
            _print_entries(data, False)
    elif args.method == "cv":
        data = cauchyinv.vandermonde_inverse_via_cv(kv, f, variant).data
        if args.log_domain:
            with np.errstate(divide="ignore"):
                _print_entries((np.log10(np.abs(data)), np.angle(data)), True)
        else:
            _print_entries(data, False)
    else:  # cauchy: the CV-matrix inverse itself, native log domain
        if args.log_domain:
            _print_entries(cauchyinv.cv_inverse_log_entries(kv, f, variant), True)
        else:
            _print_entries(cauchyinv.cv_inverse(kv, f, variant).data, False)
    return 0


def _json_safe(obj):
    if isinstance(obj, dict):
        return {k: _json_safe(v) for k, v in obj.items()}
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, float) and not math.isfinite(obj):
        return None
    return obj


def _report_line(report) -> str:
    val = report.log10value if math.isfinite(report.log10value) else None
    return json.dumps({"bound_id": report.bound_id, "log10value": val,
                       "variant": report.variant,
                       "applicable": report.applicable,
                       "reason": report.reason,
                       "params": _json_safe(report.params)})


def _cmd_bounds(args, parser) -> int:
    kv = _resolve_knots(args, parser)
    f = args.f if args.f is not None else DEFAULT_F
    if f == 0:
        parser.error("--f must be nonzero")
    f = f / abs(f)
    reports = []

    def attempt(bound_id, thunk):
        # One failing evaluator must not silence the rest of the listing.
        try:
            reports.append(thunk())
        except (VandcondError, ValueError) as exc:
            reports.append(bounds_mod.BoundReport(
                bound_id, -math.inf, None, {},
                applicable=False, reason=f"{type(exc).__name__}: {exc}"))

    attempt(bounds_mod.EASY, lambda: bounds_mod.bound_easy(kv))
    attempt(bounds_mod.REFINED_NORM, lambda: bounds_mod.bound_refined_norm(kv))
    moduli = np.abs(kv.as_array())
    small = moduli[moduli < 1.0 - 1e-9]
    if small.size:
        nu = 1.0 / float(small.max())
        k = int(small.size)
        attempt(bounds_mod.CLUSTER,
                lambda: bounds_mod.bound_cluster(kv, k, nu, "literal"))
        attempt(bounds_mod.CLUSTER,
                lambda: bounds_mod.bound_cluster(kv, k, nu, "computed-norm"))
    for variant in cauchyinv.InverseVariant:
        attempt(bounds_mod.CV_INVERSE,
                lambda v=variant: bounds_mod.bound_cv(kv, f, v))
    attempt(bounds_mod.CIRCLE_VALUE,
            lambda: bounds_mod.bound_circle_value(kv, args.grid))
    attempt(bounds_mod.COEFF_NORM, lambda: bounds_mod.bound_coeff_norm(kv))
    n = len(kv)
    if args.gen == "quasi-cyclic" and n % 3 == 0:
        q = n // 3
        for mode in bounds_mod.QC_MODES:
            if mode in ("base", "product") and (q & (q - 1)) != 0:
                continue
            attempt(f"quasi-cyclic-{mode}",
                    lambda m=mode: bounds_mod.bound_quasi_cyclic(q, m))
    attempt(bounds_mod.ARC_VANDERMONDE,
            lambda: bounds_mod.best_arc_search(kv, f, args.eta_grid)[1])
    for report in reports:
        print(_report_line(report))
    return 0


def _cmd_table(args, parser) -> int:
    overrides = {"seed": args.seed, "trials": args.trials}
    table = run_table(f"T{args.id}", overrides)
    fmt = args.format or ("csv" if args.out else "markdown")
    text = emit(table, fmt)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if all(row.get("error") for row in table.rows):
        print("error: every row failed", file=sys.stderr)
        return 3
    return 0


def _cmd_genp(args, parser) -> int:
    stats = spectral.genp_residual_experiment(args.n, args.trials, args.seed)
    print("n,trials,seed,mean_rn,std_rn")
    print(f"{stats.n},{stats.trials},{stats.seed},"
          f"{stats.mean_rn:.17g},{stats.std_rn:.17g}")
    return 0


def _cmd_build(args, parser) -> int:
    kv = _resolve_knots(args, parser)
    if args.matrix == "dft":
        M = dft(len(kv))
    elif args.matrix == "cv":
        f = args.f if args.f is not None else DEFAULT_F
        M = cv_matrix(kv, f)
    else:
        M = vandermonde(kv)
    if args.block:
        M = leading_block(M, args.block)
    if args.dump:
        with open(args.dump, "w", encoding="utf-8") as fh:
            dump_matrix(M, fh)
    else:
        dump_matrix(M, sys.stdout)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vandcond",
        description="Conditioning laboratory for Vandermonde, Cauchy, and "
                    "CV matrices.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-knots", help="generate or rewrite a knot file")
    _add_knot_source(p, with_knots=False)
    p.add_argument("--out", metavar="PATH")
    p.set_defaults(func=_cmd_gen_knots)

    p = sub.add_parser("cond", help="condition number of the knot Vandermonde")
    _add_knot_source(p)
    p.add_argument("--block", type=int, metavar="Q")
    p.set_defaults(func=_cmd_cond)

    p = sub.add_parser("invert", help="closed-form inverses")
    _add_knot_source(p)
    p.add_argument("--method", choices=["lagrange", "cv", "cauchy"],
                   default="lagrange")
    p.add_argument("--variant", choices=["paper", "corrected"],
                   default="corrected",
                   help="'paper': compact closed form exactly as stated; "
                        "'corrected': adjugate-exact entries")
    p.add_argument("--f", type=parse_complex, metavar="RE,IM")
    p.add_argument("--log-domain", action="store_true")
    p.set_defaults(func=_cmd_invert)

    p = sub.add_parser("bounds", help="evaluate lower bounds, one JSON per line")
    _add_knot_source(p)
    p.add_argument("--f", type=parse_complex, metavar="RE,IM")
    p.add_argument("--eta-grid", type=parse_eta_grid, default=(1.1, 1.2, 1.5),
                   metavar="LIST")
    p.add_argument("--grid", type=int, default=0)
    p.set_defaults(func=_cmd_bounds)

    p = sub.add_parser("table", help="run one of the experiment tables 1-5")
    p.add_argument("--id", type=int, choices=[1, 2, 3, 4, 5], required=True)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--trials", type=int, default=DEFAULT_TRIALS)
    p.add_argument("--format", choices=["csv", "markdown", "json"])
    p.add_argument("--out", metavar="PATH")
    p.set_defaults(func=_cmd_table)

    p = sub.add_parser("genp", help="no-pivoting residual experiment")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--trials", type=int, default=DEFAULT_TRIALS)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.set_defaults(func=_cmd_genp)

    p = sub.add_parser("build", help="build a matrix and dump it (debug)")
    _add_knot_source(p)
    p.add_argument("--matrix", choices=["vandermonde", "dft", "cv"],
                   default="vandermonde")
    p.add_argument("--f", type=parse_complex, metavar="RE,IM")
    p.add_argument("--block", type=int, metavar="Q")
    p.add_argument("--dump", metavar="PATH")
    p.set_defaults(func=_cmd_build)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, parser)
    except BrokenPipeError:
        # Downstream consumer (head, less, ...) closed the pipe: exit quietly.
        try:
            sys.stdout.close()
        except OSError:
            pass
        return 0
    except VandcondError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
