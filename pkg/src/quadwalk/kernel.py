"""The kernel K(x, y, t) = xy(1 - t S(x, y)), its discriminants, the curve
class, and ordered real branch points at a numeric t.

Points of the real projective line are handled through the angle chart
``[x0 : x1] = [sin(phi) : cos(phi)]``, ``phi`` in ``[-pi/4, 3*pi/4)``.  Walking
``phi`` upward from ``-pi/4`` visits ``x = -1``, then ``0``, then ``+inf``
(at ``phi = pi/2``), then negative values back towards ``-1``.  This is the
crossing order used to label branch points, and it needs no special case
for roots at infinity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np
from scipy.optimize import brentq

from .errors import DegenerateDirection, Multiplicity, NonRealRoots, NotElliptic
from .exact_algebra import (
    RING_XY,
    Poly1,
    coefficient_in,
    discriminant_in,
    fraction_to_qq,
    poly_ring,
    poly_terms_json,
    qq_to_fraction,
    total_degree,
)
from .model import WalkModel

RING_XYT = poly_ring("x,y,t")
PHI_START = -math.pi / 4
ROOT_SEPARATION = 1e-9


@dataclass(frozen=True)
class Kernel:
    """Coefficients of K as ``coeffs[(p, q)] = (c0, c1)`` meaning ``(c0 + c1 t) x**p y**q``."""

    model: WalkModel
    coeffs: dict[tuple[int, int], tuple[Fraction, Fraction]]

    @property
    def poly(self):
        x, y, t = RING_XYT.gens
        out = RING_XYT.zero
        for (p, q), (c0, c1) in self.coeffs.items():
            out += (fraction_to_qq(c0) + fraction_to_qq(c1) * t) * x**p * y**q
        return out

    def coefficient(self, p: int, q: int, t):
        c0, c1 = self.coeffs.get((p, q), (Fraction(0), Fraction(0)))
        if isinstance(t, (int, Fraction)):
            return c0 + c1 * t
        return float(c0) + float(c1) * t

    def at(self, t: Fraction):
        """K at an exact value of t, as a polynomial in x, y."""
        x, y = RING_XY.gens
        out = RING_XY.zero
        for (p, q) in self.coeffs:
            out += fraction_to_qq(self.coefficient(p, q, Fraction(t))) * x**p * y**q
        return out

    def numeric(self, t: float) -> np.ndarray:
        """3x3 array ``c[p, q]`` of float coefficients at ``t``."""
        c = np.zeros((3, 3))
        for (p, q) in self.coeffs:
            c[p, q] = self.coefficient(p, q, float(t))
        return c

    def evaluate(self, x, y, t: float):
        c = self.numeric(t)
        return sum(c[p, q] * x**p * y**q for p in range(3) for q in range(3) if c[p, q])

    def homogeneous(self, x0, x1, y0, y1, t: float):
        """``K(x0/x1, y0/y1) * x1**2 * y1**2``."""
        c = self.numeric(t)
        return sum(
            c[p, q] * x0**p * x1 ** (2 - p) * y0**q * y1 ** (2 - q)
            for p in range(3) for q in range(3) if c[p, q]
        )

    def fiber_quadratic(self, var: str, u0, u1, t: float):
        """Coefficients ``(P, Q, R)`` of ``K-bar = P v0**2 + Q v0 v1 + R v1**2``
        in the pair of ``var`` with the other variable fixed at ``[u0 : u1]``."""
        c = self.numeric(t)
        if var == "y":
            c = c.T
        return tuple(
            sum(c[p, q] * u0**q * u1 ** (2 - q) for q in range(3)) for p in (2, 1, 0)
        )


def build_kernel(m: WalkModel) -> Kernel:
    coeffs: dict[tuple[int, int], tuple[Fraction, Fraction]] = {(1, 1): (Fraction(1), Fraction(0))}
    for (a, b), w in m.weights.items():
        if w:
            key = (a + 1, b + 1)
            c0, c1 = coeffs.get(key, (Fraction(0), Fraction(0)))
            coeffs[key] = (c0, c1 - w)
    return Kernel(m, coeffs)


# ---------------------------------------------------------------------------
# discriminants


@dataclass(frozen=True)
class Discriminant:
    """``Delta([v0 : v1], t) = sum_i alpha_i(t) v0**i v1**(4-i)``."""

    var: str
    alphas: tuple[Poly1, ...]

    def alpha_values(self, t) -> list:
        if isinstance(t, (int, Fraction)):
            return [a(Fraction(t)) for a in self.alphas]
        # exact evaluation at the binary value of t, then rounding once
        tq = Fraction(t)
        return [float(a(tq)) for a in self.alphas]

    def at(self, t) -> Poly1:
        """The dehomogenized quartic ``D(v) = Delta([v : 1])`` at exact t."""
        return Poly1(tuple(a(Fraction(t)) for a in self.alphas), self.var)

    def ring_element(self):
        R = poly_ring(f"{self.var},t")
        v, t = R.gens
        out = R.zero
        for i, a in enumerate(self.alphas):
            for k, c in enumerate(a.coeffs):
                out += fraction_to_qq(c) * v**i * t**k
        return out

    def to_json(self) -> list:
        return poly_terms_json(self.ring_element())


def _discriminant(k: Kernel, fiber_var: str, keep_var: str) -> Discriminant:
    P = k.poly
    if P.degree(RING_XYT.gens[["x", "y", "t"].index(fiber_var)]) != 2:
        raise DegenerateDirection(f"K has degree < 2 in {fiber_var}")
    if not coefficient_in(P, fiber_var, 2):
        raise DegenerateDirection(f"leading coefficient in {fiber_var} vanishes")
    D = discriminant_in(P, fiber_var)
    keep = ["x", "y", "t"].index(keep_var)
    table: list[list[Fraction]] = [[Fraction(0)] * 3 for _ in range(5)]
    for mono, c in D.terms():
        table[mono[keep]][mono[2]] = qq_to_fraction(c)
    return Discriminant(keep_var, tuple(Poly1(tuple(row), "t") for row in table))


def discriminants(k: Kernel) -> tuple[Discriminant, Discriminant]:
    """``(Delta1 in x, Delta2 in y)``: discriminants of the y-fibers and x-fibers."""
    return _discriminant(k, "y", "x"), _discriminant(k, "x", "y")


# ---------------------------------------------------------------------------
# curve class


@dataclass(frozen=True)
class CurveClass:
    tag: str  # "Degenerate" | "GenusZero" | "Elliptic"
    detail: str

    def to_json(self) -> dict:
        return {"tag": self.tag, "detail": self.detail}


def classify_curve(k: Kernel) -> CurveClass:
    """Decide the class of the kernel curve over Q(t).

    K = xy + t*C1(x, y) is linear in t, so by Gauss's lemma any factorization
    over Q(t) has a t-free factor dividing both xy and C1.  Hence K is
    reducible exactly when gcd(xy, C1) is nonconstant.
    """
    x, y = RING_XY.gens
    c1 = RING_XY.zero
    for (p, q), (_, lin) in k.coeffs.items():
        c1 += fraction_to_qq(lin) * x**p * y**q
    P = k.poly
    if P.degree(0) < 2 or P.degree(1) < 2:
        return CurveClass("Degenerate", f"degree collapse: deg_x={P.degree(0)}, deg_y={P.degree(1)}")
    g = (x * y).gcd(c1)
    if total_degree(g) > 0:
        return CurveClass("Degenerate", f"reducible: common factor {g.as_expr()} of xy and the t-part")
    d1, _ = discriminants(k)
    D = d1.ring_element()
    if not D:
        return CurveClass("GenusZero", "discriminant vanishes identically")
    deg = D.degree(0)
    if deg < 3:
        return CurveClass("GenusZero", f"double root at infinity (deg_x Delta1 = {deg})")
    g = D.gcd(D.diff(D.ring.gens[0]))
    if g.degree(0) > 0:
        return CurveClass("GenusZero", f"repeated factor {g.as_expr()} in Delta1")
    return CurveClass("Elliptic", "Delta1 is a squarefree binary quartic over Q(t)")


# ---------------------------------------------------------------------------
# branch points


def canonical_angle(phi: float) -> float:
    """Representative of ``phi`` modulo pi in ``[-pi/4, 3*pi/4)``."""
    r = (phi - PHI_START) % math.pi
    return PHI_START + r


def angle_of(x0: float, x1: float) -> float:
    return canonical_angle(math.atan2(x0, x1))


def angle_to_value(phi: float) -> float:
    if abs(phi - math.pi / 2) < 1e-15:
        return math.inf
    return math.tan(phi)


def value_to_angle(v: float) -> float:
    if math.isinf(v):
        return math.pi / 2
    return canonical_angle(math.atan(v))


def quartic_in_angle(alphas: Sequence[float], phi):
    """``Delta(sin phi, cos phi)``; vectorized over ``phi``."""
    s, c = np.sin(phi), np.cos(phi)
    return sum(a * s**i * c ** (4 - i) for i, a in enumerate(alphas))


def _sign_change_roots(alphas: Sequence[float], samples: int) -> list[float]:
    grid = np.linspace(PHI_START, PHI_START + math.pi, samples + 1)
    vals = quartic_in_angle(alphas, grid)
    f = lambda p: float(quartic_in_angle(alphas, p))
    roots = []
    for k in range(samples):
        a, b = vals[k], vals[k + 1]
        if a == 0.0:
            roots.append(float(grid[k]))
        elif a * b < 0:
            roots.append(brentq(f, grid[k], grid[k + 1], xtol=1e-16, rtol=4 * np.finfo(float).eps, maxiter=200))
    return roots


@dataclass(frozen=True)
class OrderedRoots:
    """Four real roots of a binary quartic, in crossing order, as angles and values."""

    angles: tuple[float, ...]
    values: tuple[float, ...]
    alphas: tuple[float, ...]

    def to_json(self) -> list:
        return [("inf" if math.isinf(v) else v) for v in self.values]


def ordered_roots(alphas_exact: Sequence[Fraction]) -> OrderedRoots:
    alphas = [float(a) for a in alphas_exact]
    roots: list[float] = []
    for samples in (4096, 65536):
        roots = _sign_change_roots(alphas, samples)
        if len(roots) >= 4:
            break
    if alphas_exact[4] == 0:
        # exact root at infinity: snap the numerical one to pi/2
        near = [r for r in roots if abs(r - math.pi / 2) < 1e-10]
        roots = [r for r in roots if r not in near] + [math.pi / 2]
    roots = sorted(canonical_angle(r) for r in roots)
    if len(roots) != 4:
        poly = [a for a in reversed(alphas)]
        while poly and poly[0] == 0:
            poly.pop(0)
        complex_roots = np.roots(poly) if len(poly) > 1 else np.array([])
        if np.any(np.abs(complex_roots.imag) > 1e-8 * (1 + np.abs(complex_roots))):
            raise NonRealRoots(f"discriminant has non-real roots: {complex_roots}")
        raise Multiplicity(f"found {len(roots)} separated real roots instead of 4")
    gaps = [roots[(k + 1) % 4] - roots[k] + (math.pi if k == 3 else 0.0) for k in range(4)]
    if min(gaps) < ROOT_SEPARATION:
        raise Multiplicity(f"branch points closer than {ROOT_SEPARATION}: {roots}")
    return OrderedRoots(tuple(roots), tuple(angle_to_value(r) for r in roots), tuple(alphas))


@dataclass(frozen=True)
class BranchPoints:
    """Ordered branch points of both discriminants at one value of t.

    ``a`` are the roots of Delta1 (x-values), ``b`` those of Delta2.  The
    uniformization is based at the first root of each, ``a[0]`` and ``b[0]``,
    which may be infinite; ``flags`` records coincidences such as a root at
    exactly -1 where the starting point of the cyclic order is ambiguous.
    """

    t: float
    a: OrderedRoots
    b: OrderedRoots
    flags: tuple[str, ...] = ()

    @property
    def a_base(self) -> float:
        return self.a.values[0]

    @property
    def b_base(self) -> float:
        return self.b.values[0]

    def to_json(self) -> dict:
        return {"t": self.t, "a": self.a.to_json(), "b": self.b.to_json(), "flags": list(self.flags)}


def branch_points(k: Kernel, t: float) -> BranchPoints:
    if not 0 < float(t) < 1:
        raise ValueError("t must lie in (0, 1)")
    cls = classify_curve(k)
    if cls.tag != "Elliptic":
        raise NotElliptic(f"kernel curve is {cls.tag}: {cls.detail}")
    d1, d2 = discriminants(k)
    tq = Fraction(t)
    flags = []
    result = []
    for name, d in (("a", d1), ("b", d2)):
        exact = [a(tq) for a in d.alphas]
        if sum(c * (-1) ** i for i, c in enumerate(exact)) == 0:
            flags.append(f"{name}: root at exactly -1, cyclic start is ambiguous")
        result.append(ordered_roots(exact))
    return BranchPoints(float(t), result[0], result[1], tuple(flags))
