"""Decision table, guesser cross-validation and the scan of all unweighted models."""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction

from .elliptic import detect_rational_ratio, periods
from .errors import MissingStepDirection, QuadwalkError
from .group import GroupResult, group_of, orbit_sum
from .guesser import DEFAULT_GUARD, GuessProblem, GuessResult, default_workers, guess_algebraic, guess_ode
from .kernel import CurveClass, branch_points, build_kernel, classify_curve
from .model import WalkModel, all_unweighted
from .series import compress_period, specialized_series

RATIO_SAMPLES = (Fraction(1, 4), Fraction(1, 2), Fraction(3, 4))

TAGS = ("DegenerateAlgebraic", "GenusZeroUndecided", "Algebraic", "DFiniteTranscendental", "NotDFinite")


@dataclass(frozen=True)
class Classification:
    tag: str
    evidence: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"tag": self.tag, "evidence": self.evidence}


def decide(curve: CurveClass, group: GroupResult | None, orbit_sum_zero: bool | None) -> str:
    """The decision table; a pure function of exact data."""
    if curve.tag == "Degenerate":
        return "DegenerateAlgebraic"
    if curve.tag == "GenusZero":
        return "GenusZeroUndecided"
    if group is None:
        raise ValueError("an elliptic model needs a group verdict")
    if not group.is_finite:
        return "NotDFinite"
    return "Algebraic" if orbit_sum_zero else "DFiniteTranscendental"


def period_ratio_evidence(m: WalkModel, group: GroupResult) -> dict:
    """Rational-ratio detection over the three t samples, compared with the group verdict."""
    k = build_kernel(m)
    samples = []
    try:
        sets = []
        for t in RATIO_SAMPLES:
            ps = periods(branch_points(k, t), k)
            sets.append(ps)
            samples.append({"t": str(t), "omega3_over_omega2": ps.ratio})
        ratio = detect_rational_ratio(sets)
    except QuadwalkError as exc:
        return {"status": "error", "error": f"{type(exc).__name__}: {exc}", "samples": samples}
    if group.is_finite:
        half = group.order // 2
        consistent = ratio is not None and half % ratio.denominator == 0
    else:
        consistent = ratio is None
    return {
        "status": "ok",
        "ratio": None if ratio is None else str(ratio),
        "consistent": consistent,
        "samples": samples,
    }


def classify(m: WalkModel, numeric_evidence: bool = True) -> Classification:
    k = build_kernel(m)
    curve = classify_curve(k)
    evidence: dict = {"model": m.to_json(), "curve": curve.to_json()}
    group = None
    zero = None
    try:
        group = group_of(m)
        evidence["group"] = group.to_json()
        if group.is_finite:
            osum = orbit_sum(group)
            zero = osum.is_zero
            evidence["orbit_sum"] = {"is_zero": zero, "value": str(osum.value)}
    except MissingStepDirection as exc:
        if curve.tag == "Elliptic":
            raise
        evidence["group"] = {"verdict": "undefined", "diagnostic": str(exc)}
    tag = decide(curve, group, zero)
    if numeric_evidence and curve.tag == "Elliptic":
        evidence["period_ratio"] = period_ratio_evidence(m, group)
    return Classification(tag, evidence)


# ---------------------------------------------------------------------------
# cross-validation


@dataclass(frozen=True)
class Budget:
    N: int = 100
    ode_order: int = 6
    ode_degree: int = 12
    alg_degF: int = 8
    alg_degT: int = 12
    guard: int = DEFAULT_GUARD
    workers: int = 1

    def to_json(self) -> dict:
        return {
            "N": self.N, "ode_order": self.ode_order, "ode_degree": self.ode_degree,
            "alg_degF": self.alg_degF, "alg_degT": self.alg_degT, "guard": self.guard,
        }


def _series_at(m: WalkModel, budget: Budget, x0: Fraction, y0: Fraction):
    coeffs = specialized_series(m, budget.N - 1, x0, y0)
    period, compressed = compress_period(coeffs)
    return period, compressed


def _run(m: WalkModel, budget: Budget, mode: str, point: tuple[Fraction, Fraction]) -> dict:
    period, coeffs = _series_at(m, budget, *point)
    if mode == "ode":
        prob = GuessProblem(coeffs, "ode", budget.ode_order, budget.ode_degree, budget.guard)
        res: GuessResult = guess_ode(prob, budget.workers)
    else:
        prob = GuessProblem(coeffs, "algebraic", budget.alg_degF, budget.alg_degT, budget.guard)
        res = guess_algebraic(prob, budget.workers)
    return {
        "mode": mode,
        "point": [str(point[0]), str(point[1])],
        "period": period,
        "terms_used": len(coeffs),
        "result": res.to_json(),
        "found": res.found,
        "guard_ok": (not res.found) or res.validated_on_guard,
    }


ONE = (Fraction(1), Fraction(1))
ZERO = (Fraction(0), Fraction(0))


def crossvalidate(m: WalkModel, budget: Budget | None = None) -> dict:
    """Guesser outcomes against the predictions of the classification.

    Series are ``Q(x0, y0, t)`` with ``t**p`` periodicity compressed out.
    Predictions: algebraic relation found (Algebraic and DegenerateAlgebraic:
    at (0,0) or (1,1)); ODE found and algebraic relation not found at (1,1)
    (DFiniteTranscendental); ODE not found at (1,1) (NotDFinite).
    GenusZeroUndecided carries no prediction and is reported as UNCHECKED.
    """
    budget = budget or Budget()
    start = time.perf_counter()
    cls = classify(m)
    runs: list[dict] = []
    if cls.tag in ("Algebraic", "DegenerateAlgebraic"):
        for point in (ZERO, ONE):
            runs.append(_run(m, budget, "algebraic", point))
            if runs[-1]["found"]:
                break
        ok = any(r["found"] for r in runs)
        expectation = "algebraic relation found"
    elif cls.tag == "DFiniteTranscendental":
        runs.append(_run(m, budget, "ode", ONE))
        runs.append(_run(m, budget, "algebraic", ONE))
        ok = runs[0]["found"] and not runs[1]["found"]
        expectation = "ODE found, algebraic relation not found"
    elif cls.tag == "NotDFinite":
        runs.append(_run(m, budget, "ode", ONE))
        ok = not runs[0]["found"]
        expectation = "ODE not found"
    else:
        ok = None
        expectation = "none"
    guards_ok = all(r["guard_ok"] for r in runs)
    if ok is None:
        status = "UNCHECKED"
    else:
        status = "CONSISTENT" if ok and guards_ok else "INCONSISTENT"
    return {
        "status": status,
        "classification": cls.to_json(),
        "expectation": expectation,
        "budget": budget.to_json(),
        "runs": runs,
        "seconds": round(time.perf_counter() - start, 3),
    }


# ---------------------------------------------------------------------------
# scan


def _atlas_entry(m: WalkModel) -> dict:
    try:
        cls = classify(m)
    except QuadwalkError as exc:
        return {"steps": [list(s) for s in m.support], "tag": "error", "error": f"{type(exc).__name__}: {exc}"}
    ev = cls.evidence
    group = ev.get("group", {})
    entry = {
        "steps": [list(s) for s in m.support],
        "tag": cls.tag,
        "curve": ev["curve"]["tag"],
        "group": group.get("verdict"),
        "order": group.get("order"),
        "orbit_sum_zero": ev.get("orbit_sum", {}).get("is_zero"),
    }
    if "period_ratio" in ev:
        pr = ev["period_ratio"]
        entry["period_ratio"] = pr.get("ratio")
        entry["period_ratio_consistent"] = pr.get("consistent")
        if pr["status"] != "ok":
            entry["period_ratio_error"] = pr["error"]
    return entry


def scan_unweighted(workers: int | None = None) -> dict:
    """Classify all 255 nonempty unweighted step sets (raw verdicts, no model reduction)."""
    models = all_unweighted()
    workers = default_workers() if workers is None else workers
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            entries = list(pool.map(_atlas_entry, models, chunksize=8))
    else:
        entries = [_atlas_entry(m) for m in models]
    curves = Counter(e.get("curve", "error") for e in entries)
    tags = Counter(e["tag"] for e in entries)
    orders = Counter(e["order"] for e in entries if e.get("group") == "Finite")
    return {
        "models": len(entries),
        "counts_by_curve": dict(sorted(curves.items())),
        "counts_by_tag": dict(sorted(tags.items())),
        "finite_group_orders": {str(k): v for k, v in sorted(orders.items())},
        "orbit_sum_zero": [e["steps"] for e in entries if e.get("orbit_sum_zero")],
        "period_ratio_inconsistent": [e["steps"] for e in entries if e.get("period_ratio_consistent") is False],
        "entries": entries,
    }
