from collections import defaultdict
from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quadwalk.model import STEPS, from_weights, named_model
from quadwalk.series import (check_functional_equation, compress_period, enumerate_walks, specialize,
                             specialized_series)

weights = st.dictionaries(st.sampled_from(STEPS), st.integers(0, 5), min_size=1).filter(lambda w: any(w.values()))


def brute_force(m, n):
    """Weighted count of every length-n step word that stays in the quadrant, by endpoint."""
    steps = [(s, w) for s, w in m.weights.items() if w]
    out = defaultdict(Fraction)
    for word in product(steps, repeat=n):
        i = j = 0
        weight = Fraction(1)
        for (a, b), w in word:
            i, j = i + a, j + b
            if i < 0 or j < 0:
                break
            weight *= w
        else:
            out[(i, j)] += weight
    return dict(out)


@given(weights)
@settings(max_examples=25, deadline=None)
def test_enumeration_matches_path_by_path_count(raw):
    m = from_weights(raw)
    table = enumerate_walks(m, 5)
    for n in range(6):
        assert table.layer(n) == brute_force(m, n)


def test_known_counts():
    # Kreweras excursions of length 3k: 2 * 4^k (3k)! / ((k+1)! (2k+1)!) times 3^(-3k)
    kre = specialized_series(named_model("kreweras"), 9, Fraction(0), Fraction(0))
    assert [c * 3**n for n, c in enumerate(kre)][::3] == [1, 2, 16, 192]
    # Gessel excursions of length 2n: 1, 2, 11, 85 (unnormalized)
    ges = specialized_series(named_model("gessel"), 6, Fraction(0), Fraction(0))
    assert [c * 4**n for n, c in enumerate(ges)][::2] == [1, 2, 11, 85]


@given(weights, st.fractions(min_value=-2, max_value=2, max_denominator=5),
       st.fractions(min_value=-2, max_value=2, max_denominator=5))
@settings(max_examples=25, deadline=None)
def test_specialization_matches_direct_sum(raw, x0, y0):
    m = from_weights(raw)
    table = enumerate_walks(m, 6)
    expected = [sum((v * x0**i * y0**j for (i, j), v in table.layer(n).items()), Fraction(0)) for n in range(7)]
    assert specialize(table, x0, y0) == expected
    assert specialized_series(m, 6, x0, y0) == expected


@given(weights)
@settings(max_examples=30, deadline=None)
def test_functional_equation_holds_for_random_models(raw):
    assert check_functional_equation(from_weights(raw), 6).is_zero


def test_functional_equation_detects_a_corrupted_table(monkeypatch):
    import quadwalk.series as series

    m = named_model("simple")
    real = series.enumerate_walks

    def corrupted(model, N):
        table = real(model, N)
        table.layers[2][0, 0] += 1
        return table

    monkeypatch.setattr(series, "enumerate_walks", corrupted)
    assert not series.check_functional_equation(m, 4).is_zero


def test_compress_period():
    assert compress_period([1, 0, 0, 5, 0, 0, 7]) == (3, [1, 5, 7])
    assert compress_period([1, 1, 0, 1]) == (1, [1, 1, 0, 1])
    assert compress_period([3, 0, 0]) == (1, [3, 0, 0])


def test_negative_length_rejected():
    with pytest.raises(ValueError):
        enumerate_walks(named_model("simple"), -1)
