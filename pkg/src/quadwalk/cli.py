"""Command-line interface; every subcommand prints one JSON document."""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from fractions import Fraction

from . import __version__
from .checks import run_checks
from .classify import Budget, classify, crossvalidate, scan_unweighted
from .elliptic import Uniformization, detect_rational_ratio, eval_wp, periods, weierstrass
from .errors import QuadwalkError
from .exact_algebra import format_rat, parse_rat
from .group import group_of, orbit_sum
from .guesser import DEFAULT_GUARD, GuessProblem, default_workers, guess
from .kernel import branch_points, build_kernel, classify_curve, discriminants
from .model import NAMED_MODELS, WalkModel, load_model, named_model
from .series import check_functional_equation, compress_period, enumerate_walks, specialize

EXIT_OK, EXIT_ERROR, EXIT_INCONSISTENT = 0, 1, 2


def resolve_model(spec: str) -> WalkModel:
    """A named model, a path to a model file, or an inline JSON document."""
    if spec in NAMED_MODELS:
        return named_model(spec)
    if spec.lstrip().startswith("{"):
        return load_model(spec)
    if os.path.exists(spec):
        with open(spec, encoding="utf-8") as fh:
            return load_model(fh.read())
    return named_model(spec)  # raises with the list of known names


def _floats(z: complex) -> list[float]:
    return [z.real, z.imag]


def cmd_classify(args) -> tuple[dict, int]:
    return classify(resolve_model(args.model), numeric_evidence=not args.exact_only).to_json(), EXIT_OK


def cmd_crossvalidate(args) -> tuple[dict, int]:
    budget = Budget(args.n, args.ode_order, args.ode_degree, args.alg_degF, args.alg_degT, args.guard,
                    args.workers or 1)
    report = crossvalidate(resolve_model(args.model), budget)
    return report, EXIT_INCONSISTENT if report["status"] == "INCONSISTENT" else EXIT_OK


def cmd_enumerate(args) -> tuple[dict, int]:
    m = resolve_model(args.model)
    table = enumerate_walks(m, args.n)
    out = {"model": m.to_json(), "N": args.n}
    if args.x is not None or args.y is not None:
        x0 = parse_rat(args.x or "1")
        y0 = parse_rat(args.y or "1")
        out["x"], out["y"] = format_rat(x0), format_rat(y0)
        out["coefficients"] = [format_rat(c) for c in specialize(table, x0, y0)]
    else:
        out["layers"] = [
            [[i, j, format_rat(v)] for (i, j), v in sorted(table.layer(n).items())] for n in range(args.n + 1)
        ]
    if args.check:
        out["functional_equation"] = check_functional_equation(m, args.n).to_json()
    return out, EXIT_OK


def cmd_group(args) -> tuple[dict, int]:
    m = resolve_model(args.model)
    res = group_of(m)
    out = {"model": m.to_json(), **res.to_json()}
    if args.maps and res.is_finite:
        out["maps"] = [g.to_json() for g in res.elements]
    return out, EXIT_OK


def cmd_orbitsum(args) -> tuple[dict, int]:
    m = resolve_model(args.model)
    res = group_of(m)
    if not res.is_finite:
        return {"model": m.to_json(), "group": res.to_json(), "orbit_sum": None}, EXIT_OK
    return {"model": m.to_json(), "group": res.to_json(), "orbit_sum": orbit_sum(res).to_json()}, EXIT_OK


def cmd_curve(args) -> tuple[dict, int]:
    m = resolve_model(args.model)
    k = build_kernel(m)
    d1, d2 = discriminants(k)
    return {
        "model": m.to_json(),
        "curve": classify_curve(k).to_json(),
        "delta1_alphas": d1.to_json(),
        "delta2_alphas": d2.to_json(),
    }, EXIT_OK


def cmd_periods(args) -> tuple[dict, int]:
    m = resolve_model(args.model)
    k = build_kernel(m)
    t = parse_rat(args.t)
    bp = branch_points(k, t)
    ps = periods(bp, k)
    u = Uniformization(k, bp, ps)
    data = u.data
    # residual diagnostics on a fixed grid inside the period cell
    grid = [complex(ps.omega2 * a, ps.omega1 * b) for a in (0.13, 0.41, 0.77) for b in (0.19, 0.58, 0.83)]
    kernel_res = max(u.sample(w).kernel_residual for w in grid)
    ode_res = 0.0
    for w in grid:
        p, dp = eval_wp(data, w), eval_wp(data, w, 1)
        ode_res = max(ode_res, abs(dp * dp - (4 * p**3 - data.g2 * p - data.g3)) / max(1.0, abs(p) ** 3))
    samples = [periods(branch_points(k, s), k) for s in (Fraction(1, 4), Fraction(1, 2), Fraction(3, 4))]
    single = detect_rational_ratio(ps, args.max_den)
    stable = detect_rational_ratio(samples, args.max_den)
    return {
        "model": m.to_json(),
        "t": format_rat(t),
        "branch_points": bp.to_json(),
        "periods": ps.to_json(),
        "weierstrass": weierstrass(ps).to_json(),
        "ratio_at_t": None if single is None else str(single),
        "ratio_stable_over_samples": None if stable is None else str(stable),
        "diagnostics": {"max_kernel_residual": kernel_res, "max_wp_ode_relative_residual": ode_res},
    }, EXIT_OK


def cmd_guess(args) -> tuple[dict, int]:
    m = resolve_model(args.model)
    x0, y0 = parse_rat(args.x), parse_rat(args.y)
    table = enumerate_walks(m, args.n - 1)
    coeffs = specialize(table, x0, y0)
    period = 1
    if args.compress:
        period, coeffs = compress_period(coeffs)
    prob = GuessProblem(coeffs, args.mode, args.order, args.degree, args.guard)
    res = guess(prob, args.workers or 1)
    return {
        "model": m.to_json(),
        "x": format_rat(x0), "y": format_rat(y0), "N": args.n,
        "period": period,
        "series_variable": "t" if period == 1 else f"t^{period}",
        **res.to_json(),
    }, EXIT_OK


def cmd_scan(args) -> tuple[dict, int]:
    atlas = scan_unweighted(args.workers)
    if not args.full:
        atlas = {k: v for k, v in atlas.items() if k != "entries"}
    return atlas, EXIT_OK


def cmd_check(args) -> tuple[dict, int]:
    report = run_checks()
    return report, EXIT_OK if report["passed"] else EXIT_INCONSISTENT


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="quadwalk", description="Weighted quadrant walks: exact and numeric tools.")
    parser.add_argument("--version", action="version", version=f"quadwalk {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--indent", type=int, default=2, help="JSON indentation (0 for compact)")
    sub = parser.add_subparsers(dest="command", required=True)

    def command(name: str, help: str) -> argparse.ArgumentParser:
        return sub.add_parser(name, help=help, parents=[common])

    model_help = f"model name ({', '.join(NAMED_MODELS)}), model file path, or inline JSON"

    p = command("classify", help="decision-table classification with evidence")
    p.add_argument("model", help=model_help)
    p.add_argument("--exact-only", action="store_true", help="skip the numeric period-ratio evidence")
    p.set_defaults(func=cmd_classify)

    p = command("crossvalidate", help="compare guesser outcomes with the classification")
    p.add_argument("model", help=model_help)
    budget = Budget()
    p.add_argument("--n", type=int, default=budget.N)
    p.add_argument("--ode-order", type=int, default=budget.ode_order)
    p.add_argument("--ode-degree", type=int, default=budget.ode_degree)
    p.add_argument("--alg-degF", type=int, default=budget.alg_degF)
    p.add_argument("--alg-degT", type=int, default=budget.alg_degT)
    p.add_argument("--guard", type=int, default=budget.guard)
    p.add_argument("--workers", type=int, default=None)
    p.set_defaults(func=cmd_crossvalidate)

    p = command("enumerate", help="exact coefficients of Q(x, y, t)")
    p.add_argument("model", help=model_help)
    p.add_argument("--n", type=int, required=True, help="largest length")
    p.add_argument("--x", help="specialize x (p/q)")
    p.add_argument("--y", help="specialize y (p/q)")
    p.add_argument("--check", action="store_true", help="also check the functional equation through t^n")
    p.set_defaults(func=cmd_enumerate)

    p = command("group", help="finiteness of the group of the walk")
    p.add_argument("model", help=model_help)
    p.add_argument("--maps", action="store_true", help="include every group element as rational maps")
    p.set_defaults(func=cmd_group)

    p = command("orbitsum", help="signed orbit-sum of xy")
    p.add_argument("model", help=model_help)
    p.set_defaults(func=cmd_orbitsum)

    p = command("curve", help="discriminants and curve class")
    p.add_argument("model", help=model_help)
    p.set_defaults(func=cmd_curve)

    p = command("periods", help="branch points, periods and ratio detection at one t")
    p.add_argument("model", help=model_help)
    p.add_argument("--t", required=True, help="t in (0, 1) as p/q")
    p.add_argument("--max-den", type=int, default=6)
    p.set_defaults(func=cmd_periods)

    p = command("guess", help="guess an ODE or algebraic equation for a specialized series")
    p.add_argument("model", help=model_help)
    p.add_argument("--mode", choices=("ode", "algebraic"), required=True)
    p.add_argument("--order", type=int, required=True, help="ODE order r, or degree in F")
    p.add_argument("--degree", type=int, required=True, help="degree in t")
    p.add_argument("--n", type=int, default=100, help="number of series terms")
    p.add_argument("--x", default="1")
    p.add_argument("--y", default="1")
    p.add_argument("--guard", type=int, default=DEFAULT_GUARD)
    p.add_argument("--compress", action="store_true", help="drop t^p periodicity before guessing")
    p.add_argument("--workers", type=int, default=None)
    p.set_defaults(func=cmd_guess)

    p = command("scan", help="classify all 255 unweighted step sets")
    p.add_argument("--workers", type=int, default=None, help="defaults to QUADWALK_WORKERS or the CPU count")
    p.add_argument("--full", action="store_true", help="include the per-model entries")
    p.set_defaults(func=cmd_scan)

    p = command("check", help="run the built-in invariant suite")
    p.set_defaults(func=cmd_check)
    return parser


def _json_default(obj):
    if isinstance(obj, Fraction):
        return format_rat(obj)
    if isinstance(obj, complex):
        return _floats(obj)
    if isinstance(obj, float) and not math.isfinite(obj):
        return str(obj)
    return str(obj)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "workers", None) is None and args.command in ("guess", "crossvalidate"):
        args.workers = default_workers() if os.environ.get("QUADWALK_WORKERS") else 1
    try:
        out, code = args.func(args)
    except (QuadwalkError, ValueError, OSError) as exc:
        out, code = {"error": type(exc).__name__, "message": str(exc)}, EXIT_ERROR
    indent = args.indent or None
    json.dump(out, sys.stdout, indent=indent, default=_json_default)
    sys.stdout.write("\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
