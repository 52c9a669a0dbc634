import math
import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from quadwalk.guesser import (GuessProblem, algebraic_residual, guess_algebraic, guess_ode, modular_rank,
                              nullspace, ode_residual, relation_text)
from quadwalk.model import named_model
from quadwalk.series import specialized_series

CATALAN = [Fraction(math.comb(2 * n, n), n + 1) for n in range(40)]


def planted_rank_matrix(rng, rows, cols, rank):
    left = [[rng.randint(-4, 4) for _ in range(rank)] for _ in range(rows)]
    right = [[rng.randint(-4, 4) for _ in range(cols)] for _ in range(rank)]
    return [[sum(left[i][k] * right[k][j] for k in range(rank)) for j in range(cols)] for i in range(rows)]


@given(st.integers(0, 10_000), st.integers(1, 7), st.integers(1, 7), st.integers(0, 7))
@settings(max_examples=80, deadline=None)
def test_nullspace_matches_sympy(seed, rows, cols, rank):
    rng = random.Random(seed)
    a = planted_rank_matrix(rng, rows, cols, min(rank, rows, cols))
    basis = nullspace(a, cols)
    oracle = sympy.Matrix(a).nullspace()
    assert len(basis) == len(oracle)
    # same space: our basis is the reduced row echelon form of the oracle's span
    if oracle:
        rref, _ = sympy.Matrix.hstack(*oracle).T.rref()
        expected = [[Fraction(int(v.p), int(v.q)) for v in rref.row(i)] for i in range(len(oracle))]
        assert basis == expected
    for v in basis:
        assert all(sum(Fraction(x) * y for x, y in zip(row, v)) == 0 for row in a)


@given(st.integers(0, 10_000), st.integers(1, 8), st.integers(1, 8), st.integers(0, 8))
@settings(max_examples=60, deadline=None)
def test_modular_rank_matches_exact_rank(seed, rows, cols, rank):
    a = planted_rank_matrix(random.Random(seed), rows, cols, min(rank, rows, cols))
    assert modular_rank(a, 2147483647) == sympy.Matrix(a).rank()


def test_geometric_series():
    res = guess_ode(GuessProblem([1] * 20, "ode", 1, 1))
    assert res.found and res.validated_on_guard
    assert res.relation == ((1, 0), (-1, 1))
    assert relation_text("ode", res.relation) == "(1)*F + (-1 + t)*F' = 0"


def test_catalan_algebraic_and_ode():
    alg = guess_algebraic(GuessProblem(CATALAN, "algebraic", 2, 2))
    assert alg.found and alg.cell == (2, 1)
    assert not any(algebraic_residual(CATALAN, alg.relation))
    ode = guess_ode(GuessProblem(CATALAN, "ode", 2, 2))
    assert ode.found
    assert not any(ode_residual(CATALAN, ode.relation))


def test_not_found_for_a_random_series():
    rng = random.Random(1)
    noise = [Fraction(rng.randint(-10**6, 10**6)) for _ in range(60)]
    res = guess_ode(GuessProblem(noise, "ode", 3, 3))
    assert not res.found and res.cells_searched > 0
    assert res.to_json()["status"] == "NotFound"


def test_guard_rejects_a_relation_that_only_fits_the_window():
    # 1/(1-t) for 25 terms, then a perturbation that only the held-out rows see
    coeffs = [Fraction(1)] * 25 + [Fraction(2)] * 5
    res = guess_ode(GuessProblem(coeffs, "ode", 1, 1, guard=10))
    assert not res.found
    assert (1, 1) in res.guard_rejections


def test_cells_whose_window_is_too_short_are_skipped():
    rng = random.Random(2)
    noise = [Fraction(rng.randint(1, 99)) for _ in range(20)]
    res = guess_ode(GuessProblem(noise, "ode", 9, 0, guard=2))
    assert not res.found
    assert res.cells_skipped == 1  # order 9: 9 window rows for 10 unknowns
    assert res.cells_searched == 9


def test_monotone_in_bounds():
    series = specialized_series(named_model("simple"), 59, Fraction(1), Fraction(1))
    small = guess_ode(GuessProblem(series, "ode", 3, 4))
    large = guess_ode(GuessProblem(series, "ode", 4, 6))
    assert small.found and large.found
    assert large.cell == small.cell and large.relation == small.relation


def test_deterministic_and_worker_independent():
    series = specialized_series(named_model("kreweras"), 59, Fraction(0), Fraction(0))
    one = guess_algebraic(GuessProblem(series, "algebraic", 4, 8), workers=1)
    two = guess_algebraic(GuessProblem(series, "algebraic", 4, 8), workers=2)
    assert one.to_json() == two.to_json()


def test_relation_predicts_unseen_terms():
    long = specialized_series(named_model("kreweras"), 119, Fraction(0), Fraction(0))
    res = guess_algebraic(GuessProblem(long[:60], "algebraic", 4, 8))
    assert res.found
    assert not any(algebraic_residual(long, res.relation))


@pytest.mark.parametrize("bad", [
    dict(mode="other", max_order=1, max_degree=1),
    dict(mode="ode", max_order=-1, max_degree=1),
    dict(mode="ode", max_order=1, max_degree=1, guard=-2),
])
def test_problem_validation(bad):
    with pytest.raises(ValueError):
        GuessProblem([1, 2, 3], **bad)
