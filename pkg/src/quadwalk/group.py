"""The group of the walk as exact birational maps of the plane, and the orbit-sum."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DegreeBlowup, MissingStepDirection
from .exact_algebra import RING_XY, RatFunc2, fraction_to_qq
from .model import Laurent1, WalkModel, jump_decomposition

MAX_HALF_ORDER = 6


@dataclass(frozen=True)
class GroupElement:
    """A birational map ``(x, y) -> (mapX, mapY)``.

    ``word`` lists generator indices so that ``(1, 2)`` means iota1 after
    iota2, i.e. ``iota1(iota2(p))``.
    """

    mapX: RatFunc2
    mapY: RatFunc2
    word: tuple[int, ...] = ()

    @property
    def sign(self) -> int:
        return -1 if len(self.word) % 2 else 1

    @property
    def key(self) -> tuple[RatFunc2, RatFunc2]:
        return self.mapX, self.mapY

    def after(self, other: "GroupElement") -> "GroupElement":
        """``self`` composed with ``other``: first ``other``, then ``self``."""
        return GroupElement(
            self.mapX.compose(other.mapX, other.mapY),
            self.mapY.compose(other.mapX, other.mapY),
            self.word + other.word,
        )

    def __call__(self, x, y):
        return self.mapX(x, y), self.mapY(x, y)

    @property
    def degree(self) -> int:
        return max(self.mapX.degree, self.mapY.degree)

    def word_str(self) -> str:
        return "id" if not self.word else "".join(f"i{w}" for w in self.word)

    def to_json(self) -> dict:
        return {"word": self.word_str(), "sign": self.sign, "x": str(self.mapX), "y": str(self.mapY)}


IDENTITY = GroupElement(RatFunc2.var("x"), RatFunc2.var("y"), ())


def _laurent_numerator(part: Laurent1, var: str):
    v = RING_XY.gens[0 if var == "x" else 1]
    out = RING_XY.zero
    for k, c in enumerate(part.numer.coeffs):
        out += fraction_to_qq(c) * v**k
    return out


def involutions(m: WalkModel) -> tuple[GroupElement, GroupElement]:
    """``iota1 = (x, A_-1(x) / (A_1(x) y))`` and ``iota2 = (B_-1(y) / (B_1(y) x), y)``.

    The second coordinate of iota1 is the product of the two roots of the
    y-fiber of K divided by y (Vieta); both share the factor 1/x, which
    cancels.  iota2 is the same construction on x-fibers.
    """
    jd = jump_decomposition(m)
    missing = [n for n, p in (("A_1", jd.A[1]), ("A_-1", jd.A[-1]), ("B_1", jd.B[1]), ("B_-1", jd.B[-1]))
               if p.is_zero()]
    if missing:
        raise MissingStepDirection(f"identically zero: {', '.join(missing)}")
    x, y = RING_XY.gens
    i1 = GroupElement(
        RatFunc2.var("x"),
        RatFunc2.make(_laurent_numerator(jd.A[-1], "x"), _laurent_numerator(jd.A[1], "x") * y),
        (1,),
    )
    i2 = GroupElement(
        RatFunc2.make(_laurent_numerator(jd.B[-1], "y"), _laurent_numerator(jd.B[1], "y") * x),
        RatFunc2.var("y"),
        (2,),
    )
    for g in (i1, i2):
        if g.after(g).key != IDENTITY.key:
            raise AssertionError(f"{g.word_str()} is not an involution")
    return i1, i2


@dataclass(frozen=True)
class GroupResult:
    """``verdict`` is ``"Finite"`` or ``"Infinite"``.

    For a finite group of order 2n the elements are the identity, the n
    alternating words starting with iota1 and the n - 1 starting with
    iota2 (each a shortest representative, ties broken lexicographically).
    """

    verdict: str
    order: int | None
    elements: tuple[GroupElement, ...]
    sigma_order_checked: int
    diagnostic: str = ""

    @property
    def is_finite(self) -> bool:
        return self.verdict == "Finite"

    def to_json(self) -> dict:
        out = {
            "verdict": self.verdict,
            "order": self.order,
            "sigma_order_checked": self.sigma_order_checked,
            "elements": [g.word_str() for g in self.elements],
        }
        if self.diagnostic:
            out["diagnostic"] = self.diagnostic
        return out


def decide_finiteness(i1: GroupElement, i2: GroupElement, max_half_order: int = MAX_HALF_ORDER) -> GroupResult:
    """Test ``sigma**n = id`` for ``n = 1..max_half_order`` with ``sigma = iota2 iota1``.

    The alternating words of length L starting with iota1 and with iota2
    coincide exactly when ``sigma**L = id``, so each round builds the two
    length-L words (one composition each) and compares them.  Degrees grow
    like those of ``sigma**(L/2)`` rather than ``sigma**L``.
    """
    alphas: list[GroupElement] = []
    betas: list[GroupElement] = []
    prev_a, prev_b = IDENTITY, IDENTITY
    for L in range(1, max_half_order + 1):
        try:
            a_L = i1.after(prev_b)
            b_L = i2.after(prev_a)
        except DegreeBlowup as exc:
            return GroupResult("Infinite", None, (), L - 1, f"DegreeBlowup: {exc}")
        if a_L.key == b_L.key:
            elements = (IDENTITY, *alphas, a_L, *betas)
            return GroupResult("Finite", 2 * L, elements, L)
        alphas.append(a_L)
        betas.append(b_L)
        prev_a, prev_b = a_L, b_L
    return GroupResult("Infinite", None, (), max_half_order)


def group_of(m: WalkModel) -> GroupResult:
    return decide_finiteness(*involutions(m))


@dataclass(frozen=True)
class OrbitSum:
    value: RatFunc2

    @property
    def is_zero(self) -> bool:
        return self.value.is_zero()

    def __call__(self, x, y):
        return self.value(x, y)

    def to_json(self) -> dict:
        return {"is_zero": self.is_zero, "value": str(self.value), "terms": self.value.to_json()}


def orbit_sum(result: GroupResult) -> OrbitSum:
    """``sum over g of sign(g) * g(xy)``."""
    if not result.is_finite:
        raise ValueError("orbit-sum requires a finite group")
    total = RatFunc2.const(0)
    for g in result.elements:
        term = g.mapX * g.mapY
        total = total + term if g.sign > 0 else total - term
    return OrbitSum(total)
