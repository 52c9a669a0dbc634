"""A quick invariant suite over the named models, used by ``quadwalk check``."""

from __future__ import annotations

import random
import time
from fractions import Fraction
from typing import Callable

from .classify import classify
from .elliptic import (Uniformization, detect_rational_ratio, eval_phi, eval_wp, eval_zeta, periods,
                       weierstrass)
from .group import group_of, orbit_sum
from .guesser import GuessProblem, guess_algebraic, guess_ode
from .kernel import branch_points, build_kernel
from .model import named_model
from .series import check_functional_equation

WEIGHTED = ("weighted-order4", "weighted-order6", "weighted-order8", "weighted-order10")
T_SAMPLES = (Fraction(1, 4), Fraction(1, 2), Fraction(3, 4))


def _functional_equation():
    bad = [n for n in (*WEIGHTED, "simple", "single-step") if not check_functional_equation(named_model(n), 14).is_zero]
    return not bad, {"failing": bad}


def _group_orders():
    orders = {n: group_of(named_model(n)).order for n in WEIGHTED}
    return list(orders.values()) == [4, 6, 8, 10], orders


def _orbit_sums():
    zero = {n: orbit_sum(group_of(named_model(n))).is_zero for n in WEIGHTED}
    return list(zero.values()) == [False, False, True, True], zero


def _decision_table():
    want = {"weighted-order8": "Algebraic", "weighted-order4": "DFiniteTranscendental", "gessel": "Algebraic",
            "single-step": "DegenerateAlgebraic"}
    got = {n: classify(named_model(n), numeric_evidence=False).tag for n in want}
    return got == want, got


def _period_ratios():
    out = {}
    ok = True
    for n in WEIGHTED:
        m = named_model(n)
        k = build_kernel(m)
        ratio = detect_rational_ratio([periods(branch_points(k, t), k) for t in T_SAMPLES])
        half = group_of(m).order // 2
        out[n] = None if ratio is None else str(ratio)
        ok &= ratio is not None and ratio.denominator == half
    return ok, out


def _weierstrass_identities():
    rng = random.Random(7)
    worst = 0.0
    for n in ("simple", "kreweras", "weighted-order10"):
        k = build_kernel(named_model(n))
        for t in T_SAMPLES:
            ps = periods(branch_points(k, t), k)
            data = weierstrass(ps)
            for _ in range(5):
                w = complex(rng.uniform(0.1, ps.omega2), rng.uniform(0.1, ps.omega1))
                p, dp = eval_wp(data, w), eval_wp(data, w, 1)
                ode = abs(dp * dp - (4 * p**3 - data.g2 * p - data.g3)) / max(1.0, abs(p) ** 3)
                p2 = eval_wp(data, 2 * w)
                dup = abs(p2 + 2 * p - 0.25 * (eval_wp(data, w, 2) / dp) ** 2) / max(1.0, abs(p2))
                worst = max(worst, ode, dup)
    return worst < 1e-8, {"max_relative_residual": worst}


def _uniformization():
    rng = random.Random(11)
    worst = {"kernel": 0.0, "orbit_sum_y": 0.0, "sum_x_plus_y": 0.0, "phi": 0.0}
    for n in WEIGHTED:
        m = named_model(n)
        k = build_kernel(m)
        group = group_of(m)
        osum = orbit_sum(group)
        ell = group.order // 2
        for t in T_SAMPLES:
            bp = branch_points(k, t)
            ps = periods(bp, k)
            u = Uniformization(k, bp, ps)
            for _ in range(3):
                w = complex(rng.uniform(0, ps.omega2), rng.uniform(0, ps.omega1))
                s = u.sample(w)
                ox, oy = u.orbit_sums(w, ell)
                worst["kernel"] = max(worst["kernel"], s.kernel_residual)
                worst["orbit_sum_y"] = max(worst["orbit_sum_y"], abs(oy - osum(s.x, s.y)))
                worst["sum_x_plus_y"] = max(worst["sum_x_plus_y"], abs(ox + oy))
                d = u.data
                worst["phi"] = max(worst["phi"], abs(eval_phi(d, w + d.generators[0]) - eval_phi(d, w)))
    ok = worst["kernel"] < 1e-8 and worst["orbit_sum_y"] < 1e-6 and worst["sum_x_plus_y"] < 1e-6 \
        and worst["phi"] < 1e-8
    return ok, worst


def _zeta_derivative():
    k = build_kernel(named_model("kreweras"))
    ps = periods(branch_points(k, Fraction(1, 2)), k)
    data = weierstrass(ps)
    w, h = complex(1.3, 0.7), 1e-3
    fd = (-eval_zeta(data, w + 2 * h) + 8 * eval_zeta(data, w + h) - 8 * eval_zeta(data, w - h)
          + eval_zeta(data, w - 2 * h)) / (12 * h)
    rel = abs(fd + eval_wp(data, w)) / abs(eval_wp(data, w))
    return rel < 1e-6, {"relative_error": rel}


def _guesser():
    geometric = guess_ode(GuessProblem([1] * 20, "ode", 1, 1))
    catalan = [Fraction(0), Fraction(1), Fraction(1), Fraction(2), Fraction(5), Fraction(14), Fraction(42),
               Fraction(132), Fraction(429), Fraction(1430), Fraction(4862), Fraction(16796), Fraction(58786),
               Fraction(208012), Fraction(742900), Fraction(2674440), Fraction(9694845), Fraction(35357670)]
    alg = guess_algebraic(GuessProblem(catalan, "algebraic", 2, 1))
    ok = geometric.relation == ((1, 0), (-1, 1)) and alg.relation == ((0, 1), (-1, 0), (1, 0))
    return ok, {"geometric": geometric.to_json().get("relation_text"),
                "catalan": alg.to_json().get("relation_text")}


CHECKS: dict[str, Callable[[], tuple[bool, object]]] = {
    "functional_equation": _functional_equation,
    "group_orders": _group_orders,
    "orbit_sums": _orbit_sums,
    "decision_table": _decision_table,
    "period_ratios": _period_ratios,
    "weierstrass_identities": _weierstrass_identities,
    "uniformization_and_orbit_sums": _uniformization,
    "zeta_derivative": _zeta_derivative,
    "guesser_closed_forms": _guesser,
}


def run_checks() -> dict:
    results = []
    for name, fn in CHECKS.items():
        start = time.perf_counter()
        try:
            ok, detail = fn()
        except Exception as exc:  # a crashing check is a failed check
            ok, detail = False, {"error": f"{type(exc).__name__}: {exc}"}
        results.append({"name": name, "passed": bool(ok), "detail": detail,
                        "seconds": round(time.perf_counter() - start, 3)})
    return {"passed": all(r["passed"] for r in results), "checks": results}
