import json
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from quadwalk.errors import AllZero, InvalidStep, NegativeWeight, ParseError
from quadwalk.model import (STEPS, all_unweighted, from_weights, jump_decomposition, jump_polynomial,
                            load_model, named_model)

weights = st.dictionaries(st.sampled_from(STEPS), st.integers(0, 9), min_size=1).filter(lambda w: any(w.values()))
points = st.fractions(min_value=Fraction(1, 5), max_value=5, max_denominator=7)


def test_normalization_keeps_original_total():
    m = from_weights({(1, 0): 2, (0, 1): 6})
    assert m.weight(1, 0) == Fraction(1, 4)
    assert m.original_total == 8
    assert sum(m.weights.values()) == 1


@pytest.mark.parametrize("raw, error", [
    ({(1, 0): -1, (0, 1): 2}, NegativeWeight),
    ({(1, 0): 0}, AllZero),
    ({(0, 0): 1}, InvalidStep),
    ({(2, 0): 1}, InvalidStep),
])
def test_invalid_weights(raw, error):
    with pytest.raises(error):
        from_weights(raw)


@pytest.mark.parametrize("doc", [
    "not json",
    "[1, 2]",
    '{"weights": {"1,0": 0.5}}',
    '{"weights": {"1,0": "1", "(1,0)": "2"}}',
    '{"weights": {"1;0": "1"}}',
    '{"weights": {"1,0": "1"}, "extra": 1}',
    '{"name": 3, "weights": {"1,0": "1"}}',
])
def test_load_model_rejects(doc):
    with pytest.raises(ParseError):
        load_model(doc)


def test_load_model_round_trip():
    m = named_model("weighted-order6")
    doc = m.to_json()
    again = load_model(json.dumps({"name": doc["name"], "weights": doc["weights"]}))
    assert again.weights == m.weights


@given(weights, points, points)
def test_row_and_column_splits_agree_with_direct_sum(raw, x, y):
    m = from_weights(raw)
    jd = jump_decomposition(m)
    direct = jump_polynomial(m, x, y)
    assert jd.S(x, y) == direct
    assert jd.S_by_columns(x, y) == direct


@given(weights, points, points)
def test_transpose_swaps_variables(raw, x, y):
    m = from_weights(raw)
    assert jump_polynomial(m.transposed(), x, y) == jump_polynomial(m, y, x)


def test_all_unweighted_count_and_uniqueness():
    models = all_unweighted()
    assert len(models) == 255
    assert len({m.support for m in models}) == 255


def test_unknown_name_lists_known_models():
    with pytest.raises(ParseError, match="kreweras"):
        named_model("nope")
