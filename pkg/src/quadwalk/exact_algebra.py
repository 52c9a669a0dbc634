"""Exact rationals, univariate and bivariate polynomials, and canonical
bivariate rational functions.

Rationals are :class:`fractions.Fraction`.  Univariate polynomials are the
small dense :class:`Poly1` defined here.  Multivariate polynomials are sparse
``PolyElement`` objects from sympy's ring machinery over ``QQ`` with graded
lex order; bivariate gcds are delegated to it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from sympy.polys.domains import QQ
from sympy.polys.orderings import grlex
from sympy.polys.rings import PolyElement, PolyRing, ring

from .errors import DegreeBlowup, DegreeError, ParseError, ZeroDenominator

Rat = Fraction

DEGREE_CAP = 10_000


def parse_rat(text: str | int | Fraction) -> Fraction:
    """Parse ``"p/q"``, ``"p"`` or a decimal literal into an exact rational."""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, bool):
        raise ParseError(f"not a rational: {text!r}")
    if isinstance(text, int):
        return Fraction(text)
    if not isinstance(text, str):
        raise ParseError(f"not a rational: {text!r}")
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"not a rational: {text!r}") from exc


def format_rat(r: Fraction | int) -> str:
    r = Fraction(r)
    return str(r.numerator) if r.denominator == 1 else f"{r.numerator}/{r.denominator}"


def qq_to_fraction(c) -> Fraction:
    return Fraction(int(c.numerator), int(c.denominator))


def fraction_to_qq(r: Fraction | int):
    r = Fraction(r)
    return QQ(r.numerator, r.denominator)


@lru_cache(maxsize=None)
def poly_ring(names: str) -> PolyRing:
    """The (cached) polynomial ring over QQ in the comma-separated ``names``."""
    return ring(names, QQ, grlex)[0]


RING_XY = poly_ring("x,y")


# ---------------------------------------------------------------------------
# univariate


@dataclass(frozen=True)
class Poly1:
    """Dense univariate polynomial with rational coefficients, lowest degree first."""

    coeffs: tuple[Fraction, ...]
    var: str = "x"

    def __post_init__(self) -> None:
        cs = [Fraction(c) for c in self.coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    @classmethod
    def constant(cls, c, var: str = "x") -> "Poly1":
        return cls((Fraction(c),), var)

    @classmethod
    def monomial(cls, k: int, c=1, var: str = "x") -> "Poly1":
        return cls((Fraction(0),) * k + (Fraction(c),), var)

    @property
    def degree(self) -> float:
        # -inf for the zero polynomial so degree(p*q) = degree(p)+degree(q)
        return len(self.coeffs) - 1 if self.coeffs else -math.inf

    def is_zero(self) -> bool:
        return not self.coeffs

    def lc(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def coeff(self, k: int) -> Fraction:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else Fraction(0)

    def __call__(self, v):
        acc = 0 * v
        for c in reversed(self.coeffs):
            acc = acc * v + (c if isinstance(v, (int, Fraction)) else float(c))
        return acc

    def _like(self, coeffs: Iterable) -> "Poly1":
        return Poly1(tuple(coeffs), self.var)

    def __add__(self, other: "Poly1") -> "Poly1":
        n = max(len(self.coeffs), len(other.coeffs))
        return self._like(self.coeff(k) + other.coeff(k) for k in range(n))

    def __neg__(self) -> "Poly1":
        return self._like(-c for c in self.coeffs)

    def __sub__(self, other: "Poly1") -> "Poly1":
        return self + (-other)

    def __mul__(self, other) -> "Poly1":
        if not isinstance(other, Poly1):
            return self._like(c * Fraction(other) for c in self.coeffs)
        if self.is_zero() or other.is_zero():
            return self._like(())
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return self._like(out)

    __rmul__ = __mul__

    def derivative(self) -> "Poly1":
        return self._like(k * c for k, c in enumerate(self.coeffs) if k)

    def divmod(self, other: "Poly1") -> tuple["Poly1", "Poly1"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = len(rem) - len(other.coeffs)
        if dq < 0:
            return self._like(()), self
        quo = [Fraction(0)] * (dq + 1)
        lead = other.lc()
        for k in range(dq, -1, -1):
            q = rem[k + len(other.coeffs) - 1] / lead
            quo[k] = q
            if q:
                for j, b in enumerate(other.coeffs):
                    rem[k + j] -= q * b
        return self._like(quo), self._like(rem[: len(other.coeffs) - 1])

    def monic(self) -> "Poly1":
        return self * (1 / self.lc()) if self.coeffs else self

    def to_json(self) -> list[str]:
        return [format_rat(c) for c in self.coeffs]

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for k, c in enumerate(self.coeffs):
            if c:
                mono = "" if k == 0 else (self.var if k == 1 else f"{self.var}^{k}")
                parts.append(f"({format_rat(c)})" + (f"*{mono}" if mono else ""))
        return " + ".join(parts)


def gcd_poly(p: Poly1, q: Poly1) -> Poly1:
    """Monic gcd by the Euclidean algorithm; ``gcd(0, 0) = 0``."""
    a, b = p, q
    while not b.is_zero():
        a, b = b, a.divmod(b)[1]
    return a.monic()


def to_poly1(p: PolyElement, var: str | None = None) -> Poly1:
    """Convert a ring element that involves at most one generator into a Poly1."""
    gens_used = {i for mono in p.monoms() for i, e in enumerate(mono) if e}
    if len(gens_used) > 1:
        raise DegreeError("element involves more than one variable")
    idx = gens_used.pop() if gens_used else 0
    name = var or str(p.ring.symbols[idx])
    deg = max((m[idx] for m in p.monoms()), default=-1)
    coeffs = [Fraction(0)] * (deg + 1)
    for mono, c in p.terms():
        coeffs[mono[idx]] = qq_to_fraction(c)
    return Poly1(tuple(coeffs), name)


# ---------------------------------------------------------------------------
# multivariate helpers


def gen_index(p_ring: PolyRing, var) -> int:
    names = [str(s) for s in p_ring.symbols]
    if isinstance(var, int):
        return var
    if isinstance(var, PolyElement):
        var = str(var)
    return names.index(str(var))


def coefficient_in(p: PolyElement, var, k: int) -> PolyElement:
    """Coefficient of ``var**k`` in ``p``, as an element of the same ring."""
    i = gen_index(p.ring, var)
    out = p.ring.zero
    for mono, c in p.terms():
        if mono[i] == k:
            m = list(mono)
            m[i] = 0
            out += p.ring({tuple(m): c})
    return out


def discriminant_in(p: PolyElement, var) -> PolyElement:
    """``b**2 - 4*a*c`` for ``p = a*v**2 + b*v + c``; the result is free of ``v``."""
    i = gen_index(p.ring, var)
    if p.degree(i) != 2:
        raise DegreeError(f"degree in {p.ring.symbols[i]} is {p.degree(i)}, expected 2")
    a, b, c = (coefficient_in(p, i, k) for k in (2, 1, 0))
    return b**2 - 4 * a * c


def poly_terms_json(p: PolyElement) -> list[list]:
    """Sparse term list ``[[e1, e2, ..., "p/q"], ...]`` in ring order."""
    return [list(mono) + [format_rat(qq_to_fraction(c))] for mono, c in p.terms()]


def poly_from_terms(p_ring: PolyRing, terms: dict[tuple[int, ...], Fraction]) -> PolyElement:
    return p_ring({m: fraction_to_qq(c) for m, c in terms.items() if c})


def _float_terms(p: PolyElement) -> list[tuple[tuple[int, ...], float]]:
    return [(m, float(qq_to_fraction(c))) for m, c in p.terms()]


def eval_poly(p: PolyElement, values: Sequence):
    """Evaluate at numbers; exact when every value is an int or Fraction."""
    exact = all(isinstance(v, (int, Fraction)) for v in values)
    total = Fraction(0) if exact else 0j
    for mono, c in p.terms():
        term = qq_to_fraction(c) if exact else complex(float(qq_to_fraction(c)))
        for v, e in zip(values, mono):
            if e:
                term *= v**e
        total += term
    return total


# ---------------------------------------------------------------------------
# rational functions in x, y


def _canonical_scale(den: PolyElement) -> Fraction:
    """Factor that makes ``den`` integral, primitive and positive-leading."""
    coeffs = [qq_to_fraction(c) for c in den.coeffs()]
    lcm_den = math.lcm(*(c.denominator for c in coeffs))
    g = math.gcd(*(int(c * lcm_den) for c in coeffs))
    scale = Fraction(lcm_den, g)
    return -scale if qq_to_fraction(den.LC) < 0 else scale


@dataclass(frozen=True, eq=True)
class RatFunc2:
    """Bivariate rational function in canonical form.

    Numerator and denominator are coprime, and the denominator has integer
    coefficients with content 1 and a positive graded-lex leading coefficient,
    so structural equality is function equality.  Build instances with
    :meth:`make` (or :func:`normalize`); the raw constructor trusts its input.
    """

    num: PolyElement
    den: PolyElement

    @classmethod
    def make(cls, num: PolyElement, den: PolyElement | None = None) -> "RatFunc2":
        R = num.ring
        if den is None:
            den = R.one
        if not den:
            raise ZeroDenominator("denominator is zero")
        if not num:
            return cls(R.zero, R.one)
        _, num, den = num.cofactors(den)
        s = fraction_to_qq(_canonical_scale(den))
        num, den = num * s, den * s
        deg = max(total_degree(num), total_degree(den))
        if deg > DEGREE_CAP:
            raise DegreeBlowup(f"rational function degree {deg} exceeds cap {DEGREE_CAP}")
        return cls(num, den)

    @classmethod
    def const(cls, c, R: PolyRing = RING_XY) -> "RatFunc2":
        return cls.make(R(fraction_to_qq(Fraction(c))))

    @classmethod
    def var(cls, name: str, R: PolyRing = RING_XY) -> "RatFunc2":
        return cls.make(R.gens[gen_index(R, name)])

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    @property
    def ring(self) -> PolyRing:
        return self.num.ring

    def is_zero(self) -> bool:
        return not self.num

    @property
    def degree(self) -> int:
        return max(total_degree(self.num), total_degree(self.den))

    def __add__(self, other: "RatFunc2") -> "RatFunc2":
        if self.den == other.den:
            return RatFunc2.make(self.num + other.num, self.den)
        return RatFunc2.make(self.num * other.den + other.num * self.den, self.den * other.den)

    def __neg__(self) -> "RatFunc2":
        return RatFunc2(-self.num, self.den)

    def __sub__(self, other: "RatFunc2") -> "RatFunc2":
        return self + (-other)

    def __mul__(self, other: "RatFunc2") -> "RatFunc2":
        return RatFunc2.make(self.num * other.num, self.den * other.den)

    def __truediv__(self, other: "RatFunc2") -> "RatFunc2":
        if other.is_zero():
            raise ZeroDenominator("division by the zero rational function")
        return RatFunc2.make(self.num * other.den, self.den * other.num)

    def compose(self, X: "RatFunc2", Y: "RatFunc2") -> "RatFunc2":
        """Substitute ``x -> X`` and ``y -> Y``."""
        dx = max(self.num.degree(0), self.den.degree(0), 0)
        dy = max(self.num.degree(1), self.den.degree(1), 0)
        xp = _mixed_powers(X.num, X.den, dx)
        yp = _mixed_powers(Y.num, Y.den, dy)
        return RatFunc2.make(_homog_subst(self.num, xp, yp), _homog_subst(self.den, xp, yp))

    def __call__(self, xv, yv):
        d = eval_poly(self.den, (xv, yv))
        if d == 0:
            raise ZeroDivisionError("evaluation at a pole")
        return eval_poly(self.num, (xv, yv)) / d

    def to_json(self) -> dict:
        return {"num": poly_terms_json(self.num), "den": poly_terms_json(self.den)}

    def __str__(self) -> str:
        n, d = str(self.num.as_expr()), str(self.den.as_expr())
        return n if d == "1" else f"({n})/({d})"


def total_degree(p: PolyElement) -> int:
    return max((sum(m) for m in p.monoms()), default=0)


def _mixed_powers(a: PolyElement, b: PolyElement, d: int) -> list[PolyElement]:
    """``[a**i * b**(d-i) for i in 0..d]``."""
    apow, bpow = [a.ring.one], [b.ring.one]
    for _ in range(d):
        apow.append(apow[-1] * a)
        bpow.append(bpow[-1] * b)
    return [apow[i] * bpow[d - i] for i in range(d + 1)]


def _homog_subst(p: PolyElement, xp: list[PolyElement], yp: list[PolyElement]) -> PolyElement:
    # p(X, Y) scaled by Xden^dx * Yden^dy, grouped by powers of x
    by_x: dict[int, PolyElement] = {}
    for (i, j), c in p.terms():
        by_x[i] = by_x.get(i, p.ring.zero) + yp[j] * c
    out = p.ring.zero
    for i, inner in by_x.items():
        out += xp[i] * inner
    return out


def normalize(r: RatFunc2) -> RatFunc2:
    """Canonical form of ``r`` (idempotent)."""
    return RatFunc2.make(r.num, r.den)
