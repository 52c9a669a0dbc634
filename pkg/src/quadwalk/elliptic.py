"""Elliptic numerics on the kernel curve.

Periods are integrals of ``dx / sqrt(Delta1)`` between branch points.  With
``x = tan(phi)`` the differential becomes ``dphi / sqrt(Delta1(sin phi, cos phi))``,
so every path, including those through ``x = inf``, is an ordinary interval
in ``phi``.  Since all four roots are real, the quartic factors as
``lam * prod_k sin(phi - phi_k)``, which lets the endpoint singularities be
divided out analytically before tanh-sinh quadrature.

Weierstrass functions of a lattice are evaluated by reducing the argument
modulo a reduced basis ``(u, v)`` and summing trigonometric q-series in
``z/u``.  The Laurent series plus repeated duplication is kept as an
independent second route for cross-checks.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .errors import NoValidBranch, Pole, QuadratureFailure
from .kernel import BranchPoints, Kernel, angle_of, canonical_angle, discriminants, quartic_in_angle

QUAD_TOL = 1e-10
LAURENT_ORDER = 20


# ---------------------------------------------------------------------------
# tanh-sinh quadrature


def tanh_sinh(f: Callable[[float, float, float], float], tol: float = 1e-13, max_level: int = 9):
    """Integrate over [-1, 1] by the double-exponential rule.

    ``f`` receives ``(v, 1 + v, 1 - v)`` with the two distances to the
    endpoints computed without cancellation.  The step is halved until two
    successive levels agree to ``tol`` (relative); returns ``(value, error)``
    where ``error`` is the last level difference.
    """
    t_max = 4.5  # endpoint distance ~1e-55, enough for inverse square-root endpoints

    def node(t: float) -> tuple[float, float, float, float]:
        u = 0.5 * math.pi * math.sinh(t)
        e = math.exp(-2.0 * abs(u))
        # 1 - tanh|u| = 2 e / (1 + e)
        near = 2.0 * e / (1.0 + e)
        v = math.copysign(1.0 - near, t)
        w = 0.5 * math.pi * math.cosh(t) * 4.0 * e / (1.0 + e) ** 2
        if t >= 0:
            return v, 2.0 - near, near, w
        return v, near, 2.0 - near, w

    def partial(h: float, odd_only: bool) -> float:
        total = 0.0
        n = int(t_max / h)
        for k in range(-n, n + 1):
            if odd_only and k % 2 == 0:
                continue
            v, lo, hi, w = node(k * h)
            if lo <= 0.0 or hi <= 0.0:
                continue
            total += w * f(v, lo, hi)
        return total

    h = 0.5
    sum_all = partial(h, False)
    prev = h * sum_all
    err = math.inf
    for _ in range(max_level):
        h /= 2
        sum_all += partial(h, True)
        cur = h * sum_all
        err = abs(cur - prev)
        if err <= tol * max(1.0, abs(cur)):
            return cur, err
        prev = cur
    return prev, err


# ---------------------------------------------------------------------------
# arcs in the angle chart


def _sinc(u: float) -> float:
    return 1.0 - u * u / 6.0 if abs(u) < 1e-8 else math.sin(u) / u


@dataclass(frozen=True)
class AngleQuartic:
    """A binary quartic with four real roots, written ``lam * prod sin(phi - phi_k)``."""

    alphas: tuple[float, ...]
    roots: tuple[float, ...]
    lam: float

    @classmethod
    def from_roots(cls, alphas: Sequence[float], roots: Sequence[float]) -> "AngleQuartic":
        # evaluate at the middle of the widest gap between roots
        ext = list(roots) + [roots[0] + math.pi]
        k = max(range(4), key=lambda i: ext[i + 1] - ext[i])
        phi = 0.5 * (ext[k] + ext[k + 1])
        prod = math.prod(math.sin(phi - r) for r in roots)
        return cls(tuple(alphas), tuple(roots), float(quartic_in_angle(alphas, phi)) / prod)

    def __call__(self, phi: float) -> float:
        return self.lam * math.prod(math.sin(phi - r) for r in self.roots)

    def sign_on(self, phi0: float, phi1: float) -> float:
        return math.copysign(1.0, self(0.5 * (phi0 + phi1)))

    def is_root(self, phi: float, tol: float = 1e-12) -> int | None:
        for i, r in enumerate(self.roots):
            if abs(math.remainder(phi - r, math.pi)) < tol:
                return i
        return None

    def arc_integral(self, phi0: float, phi1: float, tol: float = 1e-13) -> tuple[float, float]:
        """``int_{phi0}^{phi1} dphi / sqrt|Delta|`` for ``phi0 < phi1`` with no root strictly inside."""
        half = 0.5 * (phi1 - phi0)
        lo_root, hi_root = self.is_root(phi0), self.is_root(phi1)
        others = [r for i, r in enumerate(self.roots) if i not in (lo_root, hi_root)]
        scale = abs(self.lam)

        def f(v: float, one_plus: float, one_minus: float) -> float:
            d_lo = 2.0 * half * math.sin(0.25 * math.pi * one_plus) ** 2
            d_hi = 2.0 * half * math.sin(0.25 * math.pi * one_minus) ** 2
            phi = phi0 + d_lo if v < 0 else phi1 - d_hi
            num = 1.0
            den = scale
            for r in others:
                den *= abs(math.sin(phi - r))
            if lo_root is None:
                num *= d_lo
            else:
                den *= _sinc(d_lo)
            if hi_root is None:
                num *= d_hi
            else:
                den *= _sinc(d_hi)
            return 0.5 * math.pi * math.sqrt(num / den)

        return tanh_sinh(f, tol)


def _forward(phi0: float, phi1: float) -> float:
    """``phi1`` shifted by a multiple of pi to lie in ``(phi0, phi0 + pi]``."""
    d = (phi1 - phi0) % math.pi
    return phi0 + (d if d > 0 else math.pi)


# ---------------------------------------------------------------------------
# periods


@dataclass(frozen=True)
class PeriodSet:
    """``omega1 = i * W1`` (stored as ``W1 > 0``), ``omega2 = W2 > 0``, ``0 < omega3 < W2``."""

    t: float
    omega1: float
    omega2: float
    omega3: float
    quadrature_error: float
    omega3_branch: str = ""
    flags: tuple[str, ...] = ()

    @property
    def omega1_complex(self) -> complex:
        return 1j * self.omega1

    @property
    def ratio(self) -> float:
        return self.omega3 / self.omega2

    def to_json(self) -> dict:
        return {
            "t": self.t,
            "omega1_imag": self.omega1,
            "omega2": self.omega2,
            "omega3": self.omega3,
            "omega3_over_omega2": self.ratio,
            "quadrature_error": self.quadrature_error,
            "omega3_branch": self.omega3_branch,
            "flags": list(self.flags),
        }


def _quartic_x(bp: BranchPoints) -> AngleQuartic:
    return AngleQuartic.from_roots(bp.a.alphas, bp.a.angles)


def _quartic_y(bp: BranchPoints) -> AngleQuartic:
    return AngleQuartic.from_roots(bp.b.alphas, bp.b.angles)


def _periods_12(q: AngleQuartic, tol: float) -> tuple[float, float, float, list[str]]:
    a1, a2, a3, a4 = q.roots
    flags = []
    w1, e1 = q.arc_integral(a3, a4)
    w2, e2 = q.arc_integral(a4, a1 + math.pi)
    if q.sign_on(a3, a4) > 0 or q.sign_on(a4, a1 + math.pi) < 0:
        flags.append("unexpected sign pattern of Delta1 between branch points")
    err = max(e1, e2)
    if err > tol:
        raise QuadratureFailure(f"period quadrature error {err:.3g} exceeds {tol:.1g}")
    return w1, w2, err, flags


def periods(bp: BranchPoints, k: Kernel | None = None, tol: float = QUAD_TOL) -> PeriodSet:
    """Periods ``omega1`` and ``omega2`` and, when the kernel is given, ``omega3``."""
    q = _quartic_x(bp)
    w1, w2, err, flags = _periods_12(q, tol)
    ps = PeriodSet(bp.t, w1, w2, float("nan"), err, "", tuple(flags))
    if k is None:
        return ps
    w3, branch, e3 = _omega3(bp, ps, k, q, tol)
    return PeriodSet(bp.t, w1, w2, w3, max(err, e3), branch, tuple(flags))


def _fiber_roots(k: Kernel, var: str, u_angle: float, t: float) -> list[float]:
    """Angles of the two roots of ``K-bar`` in ``var`` with the other variable at ``u_angle``."""
    P, Q, R = k.fiber_quadratic(var, math.sin(u_angle), math.cos(u_angle), t)
    disc = Q * Q - 4 * P * R
    # at a branch point the roots coincide; a rounding-level discriminant
    # would otherwise perturb the double root by sqrt(eps)
    sq = math.sqrt(disc) if disc > 1e-8 * (Q * Q + abs(4 * P * R)) else 0.0
    out = []
    for s in (1.0, -1.0):
        v1 = (-Q + s * sq, 2 * P)
        v2 = (2 * R, -Q - s * sq)
        x0, x1 = max(v1, v2, key=lambda v: math.hypot(*v))
        out.append(angle_of(x0, x1))
    return out


def _omega3(bp: BranchPoints, ps: PeriodSet, k: Kernel, q: AngleQuartic, tol: float):
    a1 = q.roots[0]
    b1 = bp.b.angles[0]
    candidates = []
    for idx, start in enumerate(_fiber_roots(k, "x", b1, bp.t)):
        label = "x+" if idx == 0 else "x-"
        for orient in ("forward", "backward"):
            if orient == "forward":
                lo, hi, sgn = start, _forward(start, a1), 1.0
            else:
                lo, hi, sgn = a1, _forward(a1, start), -1.0
            inner = [r for r in q.roots for s in (-1, 0, 1)
                     if lo + 1e-12 < r + s * math.pi < hi - 1e-12]
            if inner or hi - lo < 1e-12 or q.sign_on(lo, hi) < 0:
                continue
            val, err = q.arc_integral(lo, hi)
            val *= sgn
            if 0 < val < ps.omega2:
                candidates.append((val, f"{label}, {orient}", err))
    if not candidates:
        raise NoValidBranch("no root/orientation gives omega3 in (0, omega2)")
    val, branch, err = candidates[0]
    if err > tol:
        raise QuadratureFailure(f"omega3 quadrature error {err:.3g} exceeds {tol:.1g}")
    return val, branch, err


def omega3(bp: BranchPoints, ps: PeriodSet, k: Kernel) -> float:
    return _omega3(bp, ps, k, _quartic_x(bp), QUAD_TOL)[0]


# ---------------------------------------------------------------------------
# Weierstrass functions


def _eisenstein_E4_E6(tau: complex, terms: int = 60) -> tuple[complex, complex]:
    q = cmath.exp(2j * math.pi * tau)
    s3 = s5 = 0j
    qn = 1.0 + 0j
    for n in range(1, terms + 1):
        qn *= q
        if abs(qn) < 1e-30:
            break
        s3 += n**3 * qn / (1 - qn)
        s5 += n**5 * qn / (1 - qn)
    return 1 + 240 * s3, 1 - 504 * s5


def lattice_invariants(g1: complex, g2: complex) -> tuple[complex, complex]:
    """``g2 = 60 sum' w**-4`` and ``g3 = 140 sum' w**-6`` over the lattice ``Z g1 + Z g2``.

    Each row of the double lattice sum is summed in closed form, which gives
    the Eisenstein q-expansions in ``tau = g2/g1`` after reducing the basis.
    """
    u, v = _reduced_basis(g1, g2)
    e4, e6 = _eisenstein_E4_E6(v / u)
    return (4 * math.pi**4 / (3 * u**4)) * e4, (8 * math.pi**6 / (27 * u**6)) * e6


def _reduced_basis(g1: complex, g2: complex) -> tuple[complex, complex]:
    """Lagrange-Gauss reduced basis with ``|u| <= |v|``, ``|Re(v/u)| <= 1/2`` and ``Im(v/u) > 0``."""
    u, v = complex(g1), complex(g2)
    for _ in range(100):
        if abs(v) < abs(u):
            u, v = v, u
        m = round((v / u).real)
        if m == 0:
            break
        v = v - m * u
    if (v / u).imag < 0:
        v = -v
    return u, v


def laurent_coefficients(g2: complex, g3: complex, order: int = LAURENT_ORDER) -> list[complex]:
    """``c[k]`` with ``wp(z) = z**-2 + sum_{k>=2} c[k] z**(2k-2)``; entries 0 and 1 are unused."""
    c = [0j] * (order + 1)
    c[2] = g2 / 20
    if order >= 3:
        c[3] = g3 / 28
    for k in range(4, order + 1):
        c[k] = 3 * sum(c[m] * c[k - m] for m in range(2, k - 1)) / ((2 * k + 1) * (k - 3))
    return c


@dataclass(frozen=True)
class WeierstrassData:
    """Invariants and evaluation data for the lattice ``Z g1 + Z g2``.

    ``basis`` is a reduced basis ``(u, v)`` with ``Im(v/u) > 0``; evaluation
    uses trigonometric q-series in ``z/u`` with ``q = exp(i pi v/u)``.
    ``trig`` holds ``q**(2n) / (1 - q**(2n))`` for ``n >= 1``; ``eta`` holds
    ``zeta(u/2)`` and ``zeta(v/2)``.
    """

    generators: tuple[complex, complex]
    g2: complex
    g3: complex
    laurent: tuple[complex, ...] = field(repr=False)
    basis: tuple[complex, complex] = field(default=(0j, 0j), repr=False)
    trig: tuple[complex, ...] = field(default=(), repr=False)
    eta: tuple[complex, complex] = field(default=(0j, 0j), repr=False)

    @property
    def min_norm(self) -> float:
        a, b = self.generators
        return min(abs(a), abs(b), abs(a + b), abs(a - b))

    def coordinates(self, z: complex, basis: tuple[complex, complex] | None = None) -> tuple[float, float]:
        a, b = basis or self.generators
        det = a.real * b.imag - a.imag * b.real
        u = (z.real * b.imag - z.imag * b.real) / det
        v = (a.real * z.imag - a.imag * z.real) / det
        return u, v

    def reduce(self, z: complex, basis: tuple[complex, complex] | None = None) -> tuple[complex, int, int]:
        """``z = r + m*g1 + n*g2`` with ``r`` in the cell centred at 0."""
        a, b = basis or self.generators
        u, v = self.coordinates(z, (a, b))
        m, n = round(u), round(v)
        return z - m * a - n * b, m, n

    def to_json(self) -> dict:
        return {
            "generators": [[g.real, g.imag] for g in self.generators],
            "g2": [self.g2.real, self.g2.imag],
            "g3": [self.g3.real, self.g3.imag],
        }


def weierstrass(ps: PeriodSet, factors: tuple[int, int] = (1, 1)) -> WeierstrassData:
    """Data for the lattice generated by ``j*omega1`` and ``k*omega2``."""
    j, k = factors
    return weierstrass_lattice(j * ps.omega1_complex, complex(k * ps.omega2))


def weierstrass_lattice(g1: complex, g2: complex) -> WeierstrassData:
    inv2, inv3 = lattice_invariants(complex(g1), complex(g2))
    u, v = _reduced_basis(g1, g2)
    tau = v / u
    q2 = cmath.exp(2j * math.pi * tau)
    trig = []
    qn = 1.0 + 0j
    while True:
        qn *= q2
        if abs(qn) < 1e-32 or len(trig) >= 400:
            break
        trig.append(qn / (1 - qn))
    e2 = 1 - 24 * sum(n * c for n, c in enumerate(trig, 1))
    eta_u = math.pi**2 * e2 / (6 * u)
    # Legendre's relation  zeta(u/2) v - zeta(v/2) u = i pi
    eta_v = (eta_u * v - 1j * math.pi) / u
    return WeierstrassData((complex(g1), complex(g2)), inv2, inv3, tuple(laurent_coefficients(inv2, inv3)),
                           (u, v), tuple(trig), (eta_u, eta_v))


def _trig_eval(data: WeierstrassData, r: complex) -> tuple[complex, complex, complex]:
    """``(wp, wp', zeta)`` at ``r`` reduced modulo the basis, from the series

    ``wp = k^2 (csc^2(kr) - E2/3 - 8 sum n c_n cos(2nkr))`` with ``k = pi/u``.
    """
    u, _ = data.basis
    k = math.pi / u
    w = k * r
    s, c = cmath.sin(w), cmath.cos(w)
    csc2 = 1 / (s * s)
    cot = c / s
    sum_p = sum_dp = sum_z = 0j
    for n, cn in enumerate(data.trig, 1):
        e = cmath.exp(2j * n * w)
        if abs(cn * e) < 1e-34 and abs(cn / e) < 1e-34:
            break
        cos2, sin2 = (e + 1 / e) / 2, (e - 1 / e) / 2j
        sum_p += n * cn * cos2
        sum_dp += n * n * cn * sin2
        sum_z += cn * sin2
    eta_u = data.eta[0]
    p = k * k * csc2 - 2 * eta_u / u - 8 * k * k * sum_p
    dp = k**3 * (-2 * csc2 * cot + 16 * sum_dp)
    z = 2 * eta_u * r / u + k * cot + 4 * k * sum_z
    return p, dp, z


def _reduced(data: WeierstrassData, omega: complex) -> tuple[complex, complex]:
    """Reduced argument and the zeta shift ``2 m eta_u + 2 n eta_v``."""
    r, m, n = data.reduce(complex(omega), data.basis)
    if abs(r) < 1e-12 * data.min_norm:
        raise Pole(f"{omega} is on the lattice")
    return r, 2 * m * data.eta[0] + 2 * n * data.eta[1]


def eval_wp(data: WeierstrassData, omega: complex, derivative_order: int = 0) -> complex:
    """``wp``, ``wp'`` or ``wp''`` at ``omega``."""
    r, _ = _reduced(data, omega)
    p, dp, _ = _trig_eval(data, r)
    if derivative_order == 0:
        return p
    if derivative_order == 1:
        return dp
    if derivative_order == 2:
        return 6 * p * p - data.g2 / 2
    raise ValueError("derivative_order must be 0, 1 or 2")


def eval_zeta(data: WeierstrassData, omega: complex) -> complex:
    r, shift = _reduced(data, omega)
    return _trig_eval(data, r)[2] + shift


def quasi_periods(data: WeierstrassData) -> tuple[complex, complex]:
    """``eta_i = 2 zeta(g_i / 2)`` for both generators."""
    return tuple(2 * eval_zeta(data, g / 2) for g in data.generators)


def eval_phi(data: WeierstrassData, omega: complex) -> complex:
    """``omega1/(2 pi i) zeta(omega) - omega/(pi i) zeta(omega1/2)`` with ``omega1`` the first generator."""
    w1 = data.generators[0]
    return w1 / (2j * math.pi) * eval_zeta(data, omega) - omega / (1j * math.pi) * eval_zeta(data, w1 / 2)


# independent route: Laurent series near 0 plus repeated duplication


def _series(data: WeierstrassData, w: complex) -> tuple[complex, complex, complex]:
    """``(wp, wp', zeta)`` at small ``w`` from the Laurent series."""
    w2 = w * w
    p = 1 / w2
    dp = -2 / (w2 * w)
    z = 1 / w
    power = 1.0 + 0j  # w**(2k-4)
    for k in range(2, len(data.laurent)):
        c = data.laurent[k]
        dp += (2 * k - 2) * c * power * w
        power_full = power * w2  # w**(2k-2)
        p += c * power_full
        z -= c * power_full * w / (2 * k - 1)
        power = power_full
    return p, dp, z


def wp_by_duplication(data: WeierstrassData, omega: complex) -> tuple[complex, complex, complex]:
    """``(wp, wp', zeta)`` by halving into the Laurent disc and doubling back.

    Loses accuracy where ``wp'`` is small along the chain; kept as a cross-check.
    """
    r, shift = _reduced(data, omega)
    m = 0
    # a quarter of the convergence radius keeps the order-20 truncation below 1e-20
    while abs(r) / 2**m > 0.25 * data.min_norm:
        m += 1
    p, dp, z = _series(data, r / 2**m)
    half_g2 = data.g2 / 2
    for _ in range(m):
        ratio = (6 * p * p - half_g2) / dp
        z = 2 * z + ratio / 2
        p_new = 0.25 * ratio * ratio - 2 * p
        dp = 0.25 * ratio * (12 * p - ratio * ratio) - dp
        p = p_new
    return p, dp, z + shift


# ---------------------------------------------------------------------------
# uniformization


def _base_map(alphas: Sequence[float], base: float):
    """``wp -> coordinate`` for the quartic ``sum alphas[i] v**i`` based at the root ``base``."""
    if math.isinf(base):
        a2, a3 = alphas[2], alphas[3]
        return lambda p: (p - a2 / 3) / a3
    d1 = sum(i * a * base ** (i - 1) for i, a in enumerate(alphas) if i >= 1)
    d2 = sum(i * (i - 1) * a * base ** (i - 2) for i, a in enumerate(alphas) if i >= 2)

    def f(p):
        den = p - d2 / 6
        return complex("inf") if den == 0 else base + d1 / den

    return f


@dataclass(frozen=True)
class UniformizationSample:
    omega: complex
    x: complex
    y: complex
    kernel_residual: float


def _unit(v: complex) -> tuple[complex, complex]:
    if cmath.isinf(v):
        return 1.0 + 0j, 0j
    n = math.hypot(abs(v), 1.0)
    return v / n, 1.0 / n


class Uniformization:
    """``omega -> (x(omega), y(omega))`` parametrizing the kernel curve at fixed t.

    ``x = a + D1'(a) / (wp(omega) - D1''(a)/6)`` with ``a`` the first branch
    point of Delta1, and ``y`` likewise from Delta2 at its first branch point
    with ``wp`` evaluated at ``omega - omega3/2``.  A base point at infinity
    is handled in the chart ``x = 1/u``.
    """

    def __init__(self, k: Kernel, bp: BranchPoints, ps: PeriodSet, data: WeierstrassData | None = None):
        self.kernel, self.bp, self.ps = k, bp, ps
        self.data = data or weierstrass(ps)
        self._x = _base_map(bp.a.alphas, bp.a_base)
        self._y = _base_map(bp.b.alphas, bp.b_base)

    def x(self, omega: complex) -> complex:
        try:
            return self._x(eval_wp(self.data, omega))
        except Pole:
            return complex(self.bp.a_base) if not math.isinf(self.bp.a_base) else complex("inf")

    def y(self, omega: complex) -> complex:
        try:
            return self._y(eval_wp(self.data, omega - self.ps.omega3 / 2))
        except Pole:
            return complex(self.bp.b_base) if not math.isinf(self.bp.b_base) else complex("inf")

    def kernel_residual(self, x: complex, y: complex) -> float:
        """``|K-bar|`` at unit-normalized homogeneous coordinates of ``(x, y)``."""
        x0, x1 = _unit(x)
        y0, y1 = _unit(y)
        return abs(self.kernel.homogeneous(x0, x1, y0, y1, self.bp.t))

    def sample(self, omega: complex) -> UniformizationSample:
        x, y = self.x(omega), self.y(omega)
        return UniformizationSample(omega, x, y, self.kernel_residual(x, y))

    def b_x(self, omega: complex) -> complex:
        w3 = self.ps.omega3
        return self.y(-omega) * (self.x(omega) - self.x(omega + w3))

    def b_y(self, omega: complex) -> complex:
        return self.x(omega) * (self.y(omega) - self.y(-omega))

    def orbit_sums(self, omega: complex, ell: int) -> tuple[complex, complex]:
        """``(O_x, O_y)``: sums of ``b_x`` and ``b_y`` over ``omega + j*omega3``, ``j < ell``."""
        w3 = self.ps.omega3
        ox = sum(self.b_x(omega + j * w3) for j in range(ell))
        oy = sum(self.b_y(omega + j * w3) for j in range(ell))
        return ox, oy


def uniformize(k: Kernel, bp: BranchPoints, ps: PeriodSet, omega: complex) -> UniformizationSample:
    return Uniformization(k, bp, ps).sample(omega)


def eval_bx_by_orbitsum(u: Uniformization, omega: complex, ell: int) -> tuple[complex, complex, complex]:
    return u.b_x(omega), u.b_y(omega), u.orbit_sums(omega, ell)[0]


# ---------------------------------------------------------------------------
# rational ratio detection


def detect_rational_ratio(period_sets: PeriodSet | Sequence[PeriodSet], max_den: int = 6,
                          tol: float = 1e-6) -> Fraction | None:
    """Best rational approximation of ``omega3/omega2`` with denominator at most
    ``max_den``, accepted only if within ``tol`` and identical for every sample."""
    sets = [period_sets] if isinstance(period_sets, PeriodSet) else list(period_sets)
    found: Fraction | None = None
    for ps in sets:
        r = ps.ratio
        if not math.isfinite(r):
            return None
        cand = Fraction(r).limit_denominator(max_den)
        if abs(r - cand) >= tol or (found is not None and cand != found):
            return None
        found = cand
    return found
