import cmath
import math

import pytest

from quadwalk.elliptic import Uniformization, eval_wp, periods, weierstrass
from quadwalk.kernel import branch_points, build_kernel
from quadwalk.model import named_model

ACCEPTANCE_LINES: list[str] = []


def record(criterion: int, passed: bool, detail: str) -> None:
    line = f"criterion {criterion:>2}: {'PASS' if passed else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)


def cauchy_derivative(f, z: complex, order: int, radius: float, points: int = 64) -> complex:
    """``f^{(order)}(z)`` by the trapezoid rule on a circle (spectrally accurate for analytic f)."""
    total = 0j
    for k in range(points):
        e = cmath.exp(2j * math.pi * k / points)
        total += f(z + radius * e) / e**order
    return total / points * math.factorial(order) / radius**order


class EllipticSetup:
    def __init__(self, name, t):
        self.model = named_model(name)
        self.kernel = build_kernel(self.model)
        self.bp = branch_points(self.kernel, t)
        self.ps = periods(self.bp, self.kernel)
        self.data = weierstrass(self.ps)
        self.uniformization = Uniformization(self.kernel, self.bp, self.ps, self.data)

    def wp(self, w, order=0):
        return eval_wp(self.data, w, order)


_SETUPS: dict = {}


@pytest.fixture(scope="session")
def elliptic_setup():
    def get(name, t):
        key = (name, t)
        if key not in _SETUPS:
            _SETUPS[key] = EllipticSetup(name, t)
        return _SETUPS[key]

    return get
