"""Exception hierarchy shared by every quadwalk module."""

from __future__ import annotations


class QuadwalkError(Exception):
    """Base class for all errors raised by this package."""


# model loading
class ParseError(QuadwalkError):
    pass


class NegativeWeight(QuadwalkError):
    pass


class AllZero(QuadwalkError):
    pass


class InvalidStep(QuadwalkError):
    pass


# exact algebra
class DegreeError(QuadwalkError):
    pass


class ZeroDenominator(QuadwalkError):
    pass


# kernel geometry
class DegenerateDirection(QuadwalkError):
    pass


class NonRealRoots(QuadwalkError):
    pass


class Multiplicity(QuadwalkError):
    pass


class NotElliptic(QuadwalkError):
    pass


# group engine
class MissingStepDirection(QuadwalkError):
    pass


class DegreeBlowup(QuadwalkError):
    pass


# elliptic numerics
class QuadratureFailure(QuadwalkError):
    pass


class NoValidBranch(QuadwalkError):
    pass


class Pole(QuadwalkError):
    pass
