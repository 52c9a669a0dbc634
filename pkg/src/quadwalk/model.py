"""Weighted small-step walk models and the row/column split of the jump polynomial."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from .errors import AllZero, InvalidStep, NegativeWeight, ParseError
from .exact_algebra import Poly1, format_rat, parse_rat

Step = tuple[int, int]

STEPS: tuple[Step, ...] = tuple(
    (i, j) for i in (-1, 0, 1) for j in (-1, 0, 1) if (i, j) != (0, 0)
)


@dataclass(frozen=True)
class WalkModel:
    """Step weights normalized to sum to one.

    ``weights`` holds every one of the eight small steps (zero for absent
    ones); ``original_total`` is the sum of the weights as supplied.
    """

    weights: Mapping[Step, Fraction]
    name: str = "model"
    original_total: Fraction = Fraction(1)

    def weight(self, i: int, j: int) -> Fraction:
        return self.weights.get((i, j), Fraction(0))

    @property
    def support(self) -> tuple[Step, ...]:
        return tuple(s for s in STEPS if self.weights.get(s, 0) > 0)

    def is_symmetric(self) -> bool:
        return all(self.weight(i, j) == self.weight(j, i) for i, j in STEPS)

    def transposed(self) -> "WalkModel":
        """The model with the roles of x and y exchanged."""
        return WalkModel({(j, i): w for (i, j), w in self.weights.items()},
                         self.name + "^T", self.original_total)

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "weights": {f"{i},{j}": format_rat(w) for (i, j), w in self.weights.items() if w},
            "original_total": format_rat(self.original_total),
        }


def from_weights(weights: Mapping[Step, object], name: str = "model") -> WalkModel:
    """Validate raw weights and normalize them by their total."""
    raw: dict[Step, Fraction] = {}
    for step, w in weights.items():
        step = tuple(step)
        if step not in STEPS:
            raise InvalidStep(f"invalid step {step}")
        val = parse_rat(w) if isinstance(w, str) else Fraction(w)
        if val < 0:
            raise NegativeWeight(f"negative weight {val} on step {step}")
        raw[step] = raw.get(step, Fraction(0)) + val
    total = sum(raw.values(), Fraction(0))
    if total == 0:
        raise AllZero("all weights are zero")
    norm = {s: raw.get(s, Fraction(0)) / total for s in STEPS}
    return WalkModel(norm, name, total)


def _parse_step_key(key: str) -> Step:
    try:
        parts = [int(p) for p in key.strip().strip("()").split(",")]
    except ValueError as exc:
        raise ParseError(f"bad step key {key!r}") from exc
    if len(parts) != 2:
        raise ParseError(f"bad step key {key!r}")
    step = (parts[0], parts[1])
    if step not in STEPS:
        raise InvalidStep(f"invalid step {key!r}")
    return step


def load_model(document: str) -> WalkModel:
    """Parse a model file: ``{"name": ..., "weights": {"i,j": "p/q", ...}}``."""
    try:
        doc = json.loads(document)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ParseError("model document must be a JSON object")
    unknown = set(doc) - {"name", "weights"}
    if unknown:
        raise ParseError(f"unknown keys: {sorted(unknown)}")
    if not isinstance(doc.get("weights"), dict):
        raise ParseError("missing 'weights' object")
    name = doc.get("name", "model")
    if not isinstance(name, str):
        raise ParseError("'name' must be a string")
    weights: dict[Step, Fraction] = {}
    for key, val in doc["weights"].items():
        step = _parse_step_key(key)
        if step in weights:
            raise ParseError(f"duplicate step {key!r}")
        if isinstance(val, float):
            raise ParseError(f"weight for {key!r} must be a string or integer, not a float")
        weights[step] = parse_rat(val)
    return from_weights(weights, name)


@dataclass(frozen=True)
class Laurent1:
    """``numer(v) * v**shift`` with ``shift`` in {-1, 0}."""

    numer: Poly1
    shift: int = -1

    def __call__(self, v):
        return self.numer(v) * v**self.shift

    def is_zero(self) -> bool:
        return self.numer.is_zero()


@dataclass(frozen=True)
class JumpDecomposition:
    """``S = A[-1]/y + A[0] + A[1]*y = B[-1]/x + B[0] + B[1]*x``.

    Each ``A[j]`` is a Laurent polynomial in x stored as ``x**-1`` times a
    polynomial of degree at most two; ``B[i]`` likewise in y.
    """

    A: Mapping[int, Laurent1] = field(default_factory=dict)
    B: Mapping[int, Laurent1] = field(default_factory=dict)

    def S(self, x, y):
        return self.A[-1](x) / y + self.A[0](x) + self.A[1](x) * y

    def S_by_columns(self, x, y):
        return self.B[-1](y) / x + self.B[0](y) + self.B[1](y) * x


def jump_decomposition(m: WalkModel) -> JumpDecomposition:
    def part(fixed_axis: int, value: int, var: str) -> Laurent1:
        coeffs = [Fraction(0)] * 3
        for (i, j), w in m.weights.items():
            if (i, j)[fixed_axis] == value and w:
                free = (i, j)[1 - fixed_axis]
                coeffs[free + 1] += w
        return Laurent1(Poly1(tuple(coeffs), var), -1)

    A = {j: part(1, j, "x") for j in (-1, 0, 1)}
    B = {i: part(0, i, "y") for i in (-1, 0, 1)}
    return JumpDecomposition(A, B)


def jump_polynomial(m: WalkModel, x, y):
    """Direct evaluation of ``S(x, y) = sum d_ij x**i y**j``."""
    return sum((w * x**i * y**j for (i, j), w in m.weights.items() if w), 0 * x)


def _steps(*pairs: tuple[Step, int]) -> dict[Step, int]:
    return dict(pairs)


NAMED_MODELS: dict[str, dict[Step, int]] = {
    # the four weighted models with groups of order 4, 6, 8, 10
    "weighted-order4": _steps(((-1, 0), 3), ((1, 1), 15), ((-1, -1), 2), ((0, 1), 13),
                     ((1, 0), 9), ((1, -1), 6), ((-1, 1), 5)),
    "weighted-order6": _steps(((-1, -1), 1), ((1, 1), 7), ((0, -1), 2), ((0, 1), 7),
                     ((1, 0), 5), ((1, -1), 1)),
    "weighted-order8": _steps(((1, 1), 4), ((1, 0), 2), ((-1, 0), 6), ((-1, -1), 3)),
    "weighted-order10": _steps(((-1, 0), 1), ((1, 1), 1), ((0, -1), 1), ((0, 1), 2),
                     ((1, 0), 2), ((1, -1), 1), ((-1, 1), 1)),
    "simple": _steps(((1, 0), 1), ((-1, 0), 1), ((0, 1), 1), ((0, -1), 1)),
    "gessel": _steps(((1, 0), 1), ((-1, 0), 1), ((1, 1), 1), ((-1, -1), 1)),
    "kreweras": _steps(((1, 1), 1), ((-1, 0), 1), ((0, -1), 1)),
    "single-step": _steps(((1, 1), 1)),
}


def named_model(name: str) -> WalkModel:
    try:
        return from_weights(NAMED_MODELS[name], name)
    except KeyError:
        raise ParseError(f"unknown model name {name!r}; known: {sorted(NAMED_MODELS)}") from None


def unweighted(steps) -> WalkModel:
    steps = tuple(sorted(steps))
    label = " ".join(f"{i},{j}" for i, j in steps)
    return from_weights({s: 1 for s in steps}, f"{{{label}}}")


def all_unweighted() -> list[WalkModel]:
    """All 255 nonempty unweighted step sets, in bitmask order over ``STEPS``."""
    out = []
    for mask in range(1, 1 << len(STEPS)):
        out.append(unweighted(s for b, s in enumerate(STEPS) if mask >> b & 1))
    return out
