"""Exception types raised across the package."""

from __future__ import annotations


class StablePolyError(Exception):
    """Base class for all package errors."""


# field construction and arithmetic
class NotPrime(StablePolyError, ValueError):
    pass


class ModulusNotMonic(StablePolyError, ValueError):
    pass


class ModulusReducible(StablePolyError, ValueError):
    def __init__(self, level: int, message: str | None = None):
        self.level = level
        super().__init__(message or f"modulus of level {level} is reducible over level {level - 1}")


class DivisionByZero(StablePolyError, ZeroDivisionError):
    pass


class LevelMismatch(StablePolyError, ValueError):
    pass


class EvenCharacteristic(StablePolyError, ValueError):
    pass


# polynomials
class DegreeOverflow(StablePolyError, ValueError):
    pass


class DegreeUnsupported(StablePolyError, ValueError):
    pass


class NotSquarefree(StablePolyError, ValueError):
    pass


# stability engine
class SizeCapExceeded(StablePolyError, ValueError):
    pass


class NoRootInRequiredExtension(StablePolyError, ArithmeticError):
    pass


class ChainTooShort(StablePolyError, IndexError):
    pass


class ChainConstructionFailed(StablePolyError, ArithmeticError):
    pass


class DepthBudgetExceeded(StablePolyError, RuntimeError):
    pass


# families and classifiers
class ZeroParameter(StablePolyError, ValueError):
    pass


class WrongResidueClass(StablePolyError, ValueError):
    pass


class HypothesisViolated(StablePolyError, ValueError):
    pass


class ZeroLeadingCoefficient(StablePolyError, ValueError):
    pass


class ZeroConstantTerm(StablePolyError, ValueError):
    pass


class ZeroLinearCoefficient(StablePolyError, ValueError):
    pass


class ParseError(StablePolyError, ValueError):
    def __init__(self, message: str, position: int | None = None):
        self.position = position
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)
