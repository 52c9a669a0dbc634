"""Exact enumeration of Q(x, y, t) and the functional-equation check.

Weights are rationals with common denominator ``D``.  The dynamic program
runs on integers: layer ``n`` stores ``D**n`` times the probabilities, so a
step is a handful of shifted integer-array additions (numpy object arrays).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence

import numpy as np

from .model import WalkModel


def _integer_weights(m: WalkModel) -> tuple[int, dict[tuple[int, int], int]]:
    scale = math.lcm(*(w.denominator for w in m.weights.values()))
    return scale, {s: int(w * scale) for s, w in m.weights.items() if w}


def _step(layer: np.ndarray, iw: dict[tuple[int, int], int]) -> np.ndarray:
    # new[i, j] = sum_s w_s * old[i - a, j - b], dropping cells with i or j < 0
    n0 = layer.shape[0]
    new = np.zeros((n0 + 1, n0 + 1), dtype=object)
    for (a, b), w in iw.items():
        src = layer
        if a < 0:
            src = src[1:, :]
        if b < 0:
            src = src[:, 1:]
        i0, j0 = max(a, 0), max(b, 0)
        new[i0:i0 + src.shape[0], j0:j0 + src.shape[1]] += w * src
    return new


def _layers(m: WalkModel, N: int) -> Iterator[np.ndarray]:
    _, iw = _integer_weights(m)
    layer = np.zeros((1, 1), dtype=object)
    layer[0, 0] = 1
    yield layer
    for _ in range(N):
        layer = _step(layer, iw)
        yield layer


@dataclass(frozen=True)
class SeriesTable:
    """Exact coefficients ``q(n, i, j)`` of Q(x, y, t) for ``n <= N``.

    ``layers[n][i, j]`` is the integer ``scale**n * q(n, i, j)``.
    """

    model: WalkModel
    N: int
    scale: int
    layers: tuple[np.ndarray, ...] = field(repr=False)

    def coeff(self, n: int, i: int, j: int) -> Fraction:
        layer = self.layers[n]
        if 0 <= i < layer.shape[0] and 0 <= j < layer.shape[1]:
            return Fraction(int(layer[i, j]), self.scale**n)
        return Fraction(0)

    def layer(self, n: int) -> dict[tuple[int, int], Fraction]:
        den = self.scale**n
        lay = self.layers[n]
        return {(int(i), int(j)): Fraction(int(lay[i, j]), den) for i, j in zip(*np.nonzero(lay))}

    def totals(self) -> list[Fraction]:
        return specialize(self, Fraction(1), Fraction(1))


def enumerate_walks(m: WalkModel, N: int) -> SeriesTable:
    if N < 0:
        raise ValueError("N must be nonnegative")
    scale, _ = _integer_weights(m)
    return SeriesTable(m, N, scale, tuple(_layers(m, N)))


def _specialize_layer(layer: np.ndarray, n: int, scale: int, x0: Fraction, y0: Fraction) -> Fraction:
    size = layer.shape[0]
    xs = np.array([x0.numerator**i * x0.denominator**(size - 1 - i) for i in range(size)], dtype=object)
    ys = np.array([y0.numerator**j * y0.denominator**(size - 1 - j) for j in range(size)], dtype=object)
    total = int(xs.dot(layer).dot(ys))
    return Fraction(total, scale**n * (x0.denominator * y0.denominator) ** (size - 1))


def specialize(table: SeriesTable, x0: Fraction, y0: Fraction) -> list[Fraction]:
    """``c_n = sum_ij q(n, i, j) x0**i y0**j`` for ``n = 0..N``."""
    x0, y0 = Fraction(x0), Fraction(y0)
    return [_specialize_layer(lay, n, table.scale, x0, y0) for n, lay in enumerate(table.layers)]


def specialized_series(m: WalkModel, N: int, x0: Fraction, y0: Fraction) -> list[Fraction]:
    """Same as ``specialize(enumerate_walks(m, N), x0, y0)`` without keeping the layers."""
    scale, _ = _integer_weights(m)
    x0, y0 = Fraction(x0), Fraction(y0)
    return [_specialize_layer(lay, n, scale, x0, y0) for n, lay in enumerate(_layers(m, N))]


# ---------------------------------------------------------------------------
# truncated trivariate series


@dataclass
class TruncatedSeries3:
    """Sparse series in x, y, t keeping exponents up to ``(degX, degY, degT)``."""

    degX: int
    degY: int
    degT: int
    terms: dict[tuple[int, int, int], Fraction] = field(default_factory=dict)

    def _keep(self, i: int, j: int, n: int) -> bool:
        return i <= self.degX and j <= self.degY and n <= self.degT

    def _clean(self) -> "TruncatedSeries3":
        self.terms = {k: v for k, v in self.terms.items() if v and self._keep(*k)}
        return self

    def _orders(self, other: "TruncatedSeries3") -> tuple[int, int, int]:
        return min(self.degX, other.degX), min(self.degY, other.degY), min(self.degT, other.degT)

    def __add__(self, other: "TruncatedSeries3") -> "TruncatedSeries3":
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, Fraction(0)) + v
        return TruncatedSeries3(*self._orders(other), out)._clean()

    def __neg__(self) -> "TruncatedSeries3":
        return TruncatedSeries3(self.degX, self.degY, self.degT, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other: "TruncatedSeries3") -> "TruncatedSeries3":
        return self + (-other)

    def __mul__(self, other: "TruncatedSeries3") -> "TruncatedSeries3":
        dx, dy, dt = self._orders(other)
        out: dict[tuple[int, int, int], Fraction] = {}
        for (i1, j1, n1), a in self.terms.items():
            for (i2, j2, n2), b in other.terms.items():
                k = (i1 + i2, j1 + j2, n1 + n2)
                if k[0] <= dx and k[1] <= dy and k[2] <= dt:
                    out[k] = out.get(k, Fraction(0)) + a * b
        return TruncatedSeries3(dx, dy, dt, out)._clean()

    def is_zero(self) -> bool:
        return not any(self.terms.values())

    def coeff(self, i: int, j: int, n: int) -> Fraction:
        return self.terms.get((i, j, n), Fraction(0))


def _kernel_series(m: WalkModel, deg: int) -> TruncatedSeries3:
    # K = xy - t * sum d_ab x^(a+1) y^(b+1)
    terms: dict[tuple[int, int, int], Fraction] = {(1, 1, 0): Fraction(1)}
    for (a, b), w in m.weights.items():
        if w:
            k = (a + 1, b + 1, 1)
            terms[k] = terms.get(k, Fraction(0)) - w
    return TruncatedSeries3(deg, deg, deg, terms)._clean()


def q_series(table: SeriesTable, deg: int | None = None) -> TruncatedSeries3:
    deg = table.N if deg is None else deg
    terms = {}
    for n in range(min(deg, table.N) + 1):
        for (i, j), v in table.layer(n).items():
            terms[(i, j, n)] = v
    return TruncatedSeries3(deg + 2, deg + 2, deg, terms)


def _slice(s: TruncatedSeries3, keep) -> TruncatedSeries3:
    return TruncatedSeries3(s.degX, s.degY, s.degT, {k: v for k, v in s.terms.items() if keep(k)})


def sectional_F1(m: WalkModel, table: SeriesTable) -> TruncatedSeries3:
    """``F1(x, t) = K(x, 0, t) Q(x, 0, t)`` truncated at ``t**N``."""
    deg = table.N
    K = _kernel_series(m, deg + 2)
    return _slice(K, lambda k: k[1] == 0) * _slice(q_series(table), lambda k: k[1] == 0)


def sectional_F2(m: WalkModel, table: SeriesTable) -> TruncatedSeries3:
    """``F2(y, t) = K(0, y, t) Q(0, y, t)`` truncated at ``t**N``."""
    deg = table.N
    K = _kernel_series(m, deg + 2)
    return _slice(K, lambda k: k[0] == 0) * _slice(q_series(table), lambda k: k[0] == 0)


@dataclass(frozen=True)
class FunctionalEquationReport:
    N: int
    residual: TruncatedSeries3
    is_zero: bool

    def to_json(self) -> dict:
        from .exact_algebra import format_rat

        return {
            "N": self.N,
            "is_zero": self.is_zero,
            "nonzero_terms": [[i, j, n, format_rat(v)] for (i, j, n), v in sorted(self.residual.terms.items())],
        }


def check_functional_equation(m: WalkModel, N: int) -> FunctionalEquationReport:
    """Residual of ``K Q - F1 - F2 + K(0,0,t) Q(0,0,t) - xy`` through ``t**N``."""
    if N < 1:
        raise ValueError("N must be at least 1")
    table = enumerate_walks(m, N)
    K = _kernel_series(m, N + 2)
    Q = q_series(table)
    F1 = sectional_F1(m, table)
    F2 = sectional_F2(m, table)
    K00Q00 = _slice(K, lambda k: k[:2] == (0, 0)) * _slice(Q, lambda k: k[:2] == (0, 0))
    xy = TruncatedSeries3(N + 2, N + 2, N, {(1, 1, 0): Fraction(1)})
    residual = K * Q - F1 - F2 + K00Q00 - xy
    return FunctionalEquationReport(N, residual, residual.is_zero())


def compress_period(coeffs: Sequence[Fraction]) -> tuple[int, list[Fraction]]:
    """Largest ``p`` with support on multiples of ``p``, and ``c_{p k}``.

    If ``F(t) = G(t**p)`` then ``G`` is algebraic (resp. D-finite) exactly
    when ``F`` is, so the guesser may work on the shorter series.
    """
    support = [n for n, c in enumerate(coeffs) if c and n]
    p = 0
    for n in support:
        p = math.gcd(p, n)
    if p <= 1:
        return 1, list(coeffs)
    return p, list(coeffs[::p])
