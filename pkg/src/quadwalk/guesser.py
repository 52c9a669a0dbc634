"""Guessing linear ODEs and algebraic equations for a truncated power series.

Each search cell fixes the shape of the relation (ODE order and coefficient
degree, or algebraic degree in F and in t).  The unknown coefficients solve
a linear system whose rows are the coefficients of ``t**n`` of the relation
applied to the series.  The rows split into a solving window and ``guard``
held-out rows at the top.  A cell succeeds when the window nullspace is
nonzero and every window solution also kills the guard rows.

A cell is first screened modulo a word-size prime: full column rank there
implies full rank over Q, which rules the cell out cheaply.  Surviving cells
get an exact fraction-free (Bareiss) elimination.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .exact_algebra import format_rat

DEFAULT_GUARD = 10
_PRIMES = (2147483647, 2147483629, 2147483587)


@dataclass(frozen=True)
class GuessProblem:
    """``mode`` is ``"ode"`` (order ``r``, degree ``d``) or ``"algebraic"`` (``dF``, ``dT``)."""

    coefficients: tuple[Fraction, ...]
    mode: str
    max_order: int
    max_degree: int
    guard: int = DEFAULT_GUARD

    def __post_init__(self):
        if self.mode not in ("ode", "algebraic"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.max_order < 0 or self.max_degree < 0 or self.guard < 0:
            raise ValueError("bounds and guard must be nonnegative")
        object.__setattr__(self, "coefficients", tuple(Fraction(c) for c in self.coefficients))

    @property
    def N(self) -> int:
        return len(self.coefficients)


@dataclass(frozen=True)
class GuessResult:
    """``relation[i][j]`` is the coefficient of ``t**j`` in front of ``F^{(i)}``
    (ODE) or of ``F**i`` (algebraic), integer-valued with content 1."""

    found: bool
    mode: str
    bounds: tuple[int, int]
    cell: tuple[int, int] | None = None
    relation: tuple[tuple[int, ...], ...] | None = None
    validated_on_guard: bool = False
    cells_searched: int = 0
    cells_skipped: int = 0
    guard_rejections: tuple[tuple[int, int], ...] = ()

    def to_json(self) -> dict:
        out = {
            "status": "Found" if self.found else "NotFound",
            "mode": self.mode,
            "search_bounds": list(self.bounds),
            "cells_searched": self.cells_searched,
            "cells_skipped": self.cells_skipped,
            "guard_rejections": [list(c) for c in self.guard_rejections],
        }
        if self.found:
            out["cell"] = list(self.cell)
            out["validated_on_guard"] = self.validated_on_guard
            out["relation"] = [[str(c) for c in row] for row in self.relation]
            out["relation_text"] = relation_text(self.mode, self.relation)
        return out


def _monomial(c: int, j: int) -> str:
    power = "" if j == 0 else ("t" if j == 1 else f"t^{j}")
    if not power:
        return str(c)
    return power if c == 1 else (f"-{power}" if c == -1 else f"{c}*{power}")


def relation_text(mode: str, relation: Sequence[Sequence[int]]) -> str:
    terms = []
    for i, row in enumerate(relation):
        poly = " + ".join(_monomial(c, j) for j, c in enumerate(row) if c)
        if not poly:
            continue
        target = ("F" + "'" * i if i <= 3 else f"F^({i})") if mode == "ode" else f"F^{i}"
        terms.append(f"({poly})*{target}")
    return " + ".join(terms) + " = 0"


# ---------------------------------------------------------------------------
# linear systems


def _ode_rows(f: Sequence[Fraction], r: int, d: int) -> list[list[Fraction]]:
    """Row ``n`` (``n = 0 .. N-1-r``) lists the coefficient of ``t**n`` in
    ``t**j * F^{(i)}`` for unknowns ordered by ``(i, j)``."""
    N = len(f)
    rows = []
    for n in range(N - r):
        row = []
        for i in range(r + 1):
            for j in range(d + 1):
                k = n - j
                row.append(Fraction(math.perm(k + i, i)) * f[k + i] if k >= 0 else Fraction(0))
        rows.append(row)
    return rows


def _power_table(f: Sequence[Fraction], k: int) -> list[list[Fraction]]:
    N = len(f)
    powers = [[Fraction(1)] + [Fraction(0)] * (N - 1)]
    for _ in range(k):
        prev = powers[-1]
        powers.append([sum((prev[a] * f[n - a] for a in range(n + 1) if prev[a] and f[n - a]), Fraction(0))
                       for n in range(N)])
    return powers


def _algebraic_rows(powers: list[list[Fraction]], dF: int, dT: int) -> list[list[Fraction]]:
    N = len(powers[0])
    rows = []
    for n in range(N):
        rows.append([powers[i][n - j] if n >= j else Fraction(0) for i in range(dF + 1) for j in range(dT + 1)])
    return rows


def _integer_row(row: Sequence[Fraction]) -> list[int]:
    den = math.lcm(*(c.denominator for c in row)) if row else 1
    return [int(c * den) for c in row]


def modular_rank(rows: Sequence[Sequence[int]], p: int) -> int:
    """Rank of an integer matrix modulo the prime ``p < 2**31``."""
    if not rows:
        return 0
    a = np.array([[c % p for c in row] for row in rows], dtype=np.int64)
    m, n = a.shape
    rank = 0
    for col in range(n):
        if rank == m:
            break
        nz = np.nonzero(a[rank:, col])[0]
        if nz.size == 0:
            continue
        piv = rank + int(nz[0])
        if piv != rank:
            a[[rank, piv]] = a[[piv, rank]]
        inv = pow(int(a[rank, col]), p - 2, p)
        a[rank] = (a[rank] * inv) % p
        below = a[rank + 1:, col].copy()
        if below.any():
            a[rank + 1:] = (a[rank + 1:] - np.outer(below, a[rank]) % p) % p
        rank += 1
    return rank


def nullspace(rows: Sequence[Sequence[int]], ncols: int) -> list[list[Fraction]]:
    """Basis of the right nullspace of an integer matrix, in reduced row echelon form.

    Forward elimination is fraction-free (Bareiss); the echelon form is then
    solved for one basis vector per free column.
    """
    a = [list(map(int, row)) for row in rows]
    m = len(a)
    pivots: list[int] = []
    prev = 1
    r = 0
    for col in range(ncols):
        if r == m:
            break
        piv = next((i for i in range(r, m) if a[i][col]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        pr = a[r]
        pc = pr[col]
        for i in range(r + 1, m):
            ri = a[i]
            ci = ri[col]
            a[i] = [(pc * ri[k] - ci * pr[k]) // prev for k in range(ncols)]
        prev = pc
        pivots.append(col)
        r += 1
    # back substitution on the echelon rows
    echelon = [[Fraction(v) for v in a[i]] for i in range(r)]
    for i in range(r - 1, -1, -1):
        c = pivots[i]
        lead = echelon[i][c]
        echelon[i] = [v / lead for v in echelon[i]]
        for k in range(i):
            factor = echelon[k][c]
            if factor:
                echelon[k] = [x - factor * y for x, y in zip(echelon[k], echelon[i])]
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for i, c in enumerate(pivots):
            v[c] = -echelon[i][fc]
        basis.append(v)
    return _rref(basis)


def _rref(vectors: list[list[Fraction]]) -> list[list[Fraction]]:
    rows = [list(v) for v in vectors]
    if not rows:
        return []
    n = len(rows[0])
    out: list[list[Fraction]] = []
    for col in range(n):
        piv = next((i for i, row in enumerate(rows) if row[col]), None)
        if piv is None:
            continue
        row = rows.pop(piv)
        row = [v / row[col] for v in row]
        rows = [[x - r[col] * y for x, y in zip(r, row)] for r in rows]
        out = [[x - o[col] * y for x, y in zip(o, row)] for o in out]
        out.append(row)
    return out


def _canonical(vector: Sequence[Fraction]) -> list[int]:
    den = math.lcm(*(v.denominator for v in vector))
    ints = [int(v * den) for v in vector]
    g = math.gcd(*ints)
    ints = [v // g for v in ints]
    lead = next(v for v in ints if v)
    return [-v for v in ints] if lead < 0 else ints


def _full_column_rank_mod_p(rows: Sequence[Sequence[int]], ncols: int) -> bool:
    for p in _PRIMES:
        if modular_rank(rows, p) == ncols:
            return True
    return False


# ---------------------------------------------------------------------------
# cells


@dataclass(frozen=True)
class _CellOutcome:
    cell: tuple[int, int]
    status: str  # "found", "none", "guard", "skipped"
    vector: tuple[int, ...] = field(default=())


def _solve_cell(rows: list[list[Fraction]], ncols: int, guard: int, cell: tuple[int, int]) -> _CellOutcome:
    n_window = len(rows) - guard
    if n_window < ncols:
        return _CellOutcome(cell, "skipped")
    window = [_integer_row(r) for r in rows[:n_window]]
    if _full_column_rank_mod_p(window, ncols):
        return _CellOutcome(cell, "none")
    basis = nullspace(window, ncols)
    if not basis:
        return _CellOutcome(cell, "none")
    held_out = rows[n_window:]
    for v in basis:
        if any(sum(a * b for a, b in zip(row, v)) for row in held_out):
            return _CellOutcome(cell, "guard")
    return _CellOutcome(cell, "found", tuple(_canonical(basis[0])))


def _ode_cell(args) -> _CellOutcome:
    f, r, d, guard = args
    return _solve_cell(_ode_rows(f, r, d), (r + 1) * (d + 1), guard, (r, d))


def _algebraic_cell(args) -> _CellOutcome:
    powers, dF, dT, guard = args
    return _solve_cell(_algebraic_rows(powers, dF, dT), (dF + 1) * (dT + 1), guard, (dF, dT))


def default_workers() -> int:
    env = os.environ.get("QUADWALK_WORKERS")
    if env:
        return max(1, int(env))
    return max(1, os.cpu_count() or 1)


def _first_found(worker, tasks: list, workers: int) -> tuple[_CellOutcome | None, list[_CellOutcome]]:
    """Evaluate cells in scan order; the first success in that order wins."""
    seen: list[_CellOutcome] = []
    if workers <= 1:
        for task in tasks:
            out = worker(task)
            seen.append(out)
            if out.status == "found":
                return out, seen
        return None, seen
    with ProcessPoolExecutor(max_workers=workers) as pool:
        for start in range(0, len(tasks), workers):
            batch = list(pool.map(worker, tasks[start:start + workers]))
            for out in batch:
                seen.append(out)
                if out.status == "found":
                    return out, seen
    return None, seen


def _admissible(N: int, unknowns: int, guard: int) -> bool:
    return N > unknowns + guard


def _result(mode: str, bounds, winner, seen, shape) -> GuessResult:
    skipped = sum(o.status == "skipped" for o in seen)
    rejected = tuple(o.cell for o in seen if o.status == "guard")
    if winner is None:
        return GuessResult(False, mode, bounds, cells_searched=len(seen) - skipped,
                           cells_skipped=skipped, guard_rejections=rejected)
    a, b = shape(winner.cell)
    vec = winner.vector
    table = tuple(tuple(vec[i * (b + 1):(i + 1) * (b + 1)]) for i in range(a + 1))
    return GuessResult(True, mode, bounds, winner.cell, table, True, len(seen) - skipped, skipped, rejected)


def guess_ode(p: GuessProblem, workers: int = 1) -> GuessResult:
    """Search ``sum_i p_i(t) F^{(i)} = 0`` with ``deg p_i <= d``, scanning ``r`` then ``d`` upward."""
    if p.mode != "ode":
        raise ValueError("guess_ode needs an ODE problem")
    f = p.coefficients
    tasks = [(f, r, d, p.guard) for r in range(p.max_order + 1) for d in range(p.max_degree + 1)
             if _admissible(p.N, (r + 1) * (d + 1), p.guard)]
    winner, seen = _first_found(_ode_cell, tasks, workers)
    result = _result("ode", (p.max_order, p.max_degree), winner, seen, lambda c: c)
    if result.found:
        assert not any(ode_residual(f, result.relation)), "relation fails on the supplied terms"
    return result


def guess_algebraic(p: GuessProblem, workers: int = 1) -> GuessResult:
    """Search ``sum_{i,j} c_ij t^j F^i = 0``, scanning ``dF`` then ``dT`` upward."""
    if p.mode != "algebraic":
        raise ValueError("guess_algebraic needs an algebraic problem")
    f = p.coefficients
    powers = _power_table(f, p.max_order)
    tasks = [(powers[:dF + 1], dF, dT, p.guard) for dF in range(1, p.max_order + 1)
             for dT in range(p.max_degree + 1) if _admissible(p.N, (dF + 1) * (dT + 1), p.guard)]
    winner, seen = _first_found(_algebraic_cell, tasks, workers)
    result = _result("algebraic", (p.max_order, p.max_degree), winner, seen, lambda c: c)
    if result.found:
        assert not any(algebraic_residual(f, result.relation)), "relation fails on the supplied terms"
    return result


def guess(p: GuessProblem, workers: int = 1) -> GuessResult:
    return guess_ode(p, workers) if p.mode == "ode" else guess_algebraic(p, workers)


# ---------------------------------------------------------------------------
# residuals on every available coefficient


def ode_residual(f: Sequence[Fraction], relation: Sequence[Sequence[int]]) -> list[Fraction]:
    """Coefficients of ``t**n`` of the ODE applied to ``F``, for every ``n`` the data determines."""
    r = len(relation) - 1
    d = len(relation[0]) - 1
    rows = _ode_rows([Fraction(c) for c in f], r, d)
    flat = [c for row in relation for c in row]
    return [sum(a * b for a, b in zip(row, flat)) for row in rows]


def algebraic_residual(f: Sequence[Fraction], relation: Sequence[Sequence[int]]) -> list[Fraction]:
    dF = len(relation) - 1
    dT = len(relation[0]) - 1
    rows = _algebraic_rows(_power_table([Fraction(c) for c in f], dF), dF, dT)
    flat = [c for row in relation for c in row]
    return [sum(a * b for a, b in zip(row, flat)) for row in rows]


def format_series(coeffs: Iterable[Fraction]) -> list[str]:
    return [format_rat(c) for c in coeffs]
