import math
from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from quadwalk.errors import NotElliptic
from quadwalk.kernel import (angle_to_value, branch_points, build_kernel, canonical_angle, classify_curve,
                             discriminants, value_to_angle)
from quadwalk.model import named_model, unweighted

X, Y, T = sympy.symbols("x y t")


def kernel_expr(m):
    S = sum(sympy.Rational(w.numerator, w.denominator) * X**i * Y**j for (i, j), w in m.weights.items() if w)
    return sympy.expand(X * Y * (1 - T * S))


@pytest.mark.parametrize("name", ["simple", "kreweras", "gessel", "weighted-order4", "weighted-order6", "weighted-order8", "weighted-order10"])
def test_discriminants_match_sympy(name):
    m = named_model(name)
    k = build_kernel(m)
    K = kernel_expr(m)
    assert sympy.expand(k.poly.as_expr() - K) == 0
    d1, d2 = discriminants(k)
    assert sympy.expand(d1.ring_element().as_expr() - sympy.discriminant(K, Y)) == 0
    assert sympy.expand(d2.ring_element().as_expr() - sympy.discriminant(K, X)) == 0


def test_symmetric_model_has_equal_discriminants():
    d1, d2 = discriminants(build_kernel(named_model("simple")))
    assert d1.alphas == d2.alphas


@pytest.mark.parametrize("steps, tag", [
    ([(1, 1)], "Degenerate"),
    ([(1, 0), (0, 1)], "Degenerate"),
    ([(1, 0), (-1, 0), (0, 1), (0, -1)], "Elliptic"),
    ([(1, 1), (-1, 0), (0, -1)], "Elliptic"),
    ([(-1, 1), (1, -1), (1, 1)], "GenusZero"),
])
def test_curve_classes(steps, tag):
    assert classify_curve(build_kernel(unweighted(steps))).tag == tag


@pytest.mark.parametrize("name", ["simple", "kreweras", "gessel", "weighted-order4", "weighted-order6", "weighted-order8", "weighted-order10"])
@pytest.mark.parametrize("t", [Fraction(1, 4), Fraction(1, 2), Fraction(3, 4)])
def test_branch_points_match_companion_eigenvalues(name, t):
    k = build_kernel(named_model(name))
    bp = branch_points(k, t)
    d1, d2 = discriminants(k)
    for roots, d in ((bp.a, d1), (bp.b, d2)):
        coeffs = [float(a(t)) for a in d.alphas]
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        eig = np.roots(coeffs[::-1])
        finite = sorted(v for v in roots.values if not math.isinf(v))
        assert len(finite) == len(eig)
        assert np.allclose(sorted(eig.real), finite, rtol=1e-9, atol=1e-9)
        # ordering: angles increase within one turn of the chart
        assert list(roots.angles) == sorted(roots.angles)
        assert roots.angles[-1] - roots.angles[0] < math.pi


def test_non_elliptic_model_has_no_branch_points():
    with pytest.raises(NotElliptic):
        branch_points(build_kernel(named_model("single-step")), 0.5)


def test_t_outside_unit_interval_rejected():
    with pytest.raises(ValueError):
        branch_points(build_kernel(named_model("simple")), 1.5)


@given(st.floats(min_value=-1e6, max_value=1e6, allow_nan=False))
def test_angle_chart_round_trip(v):
    phi = value_to_angle(v)
    assert -math.pi / 4 <= phi < 3 * math.pi / 4
    assert math.isclose(angle_to_value(phi), v, rel_tol=1e-9, abs_tol=1e-12)


@given(st.floats(min_value=-20, max_value=20, allow_nan=False))
@settings(max_examples=50)
def test_canonical_angle_is_mod_pi(phi):
    c = canonical_angle(phi)
    assert -math.pi / 4 <= c < 3 * math.pi / 4 + 1e-12
    assert abs(math.remainder(c - phi, math.pi)) < 1e-9
