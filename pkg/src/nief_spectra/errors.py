"""Exception hierarchy shared by the core modules and the CLI.

Every exception carries a stable ``name`` so that the command-line front end
can report it in machine-readable form.
"""
from __future__ import annotations

from dataclasses import dataclass


class NiefError(Exception):
    """Base class for all library errors."""

    name = "NiefError"


class ValidationError(NiefError, ValueError):
    """Raised when input parameters violate a model invariant.

    ``violations`` holds one :class:`Violation` per failed check.
    """

    name = "ValidationError"

    def __init__(self, violations):
        self.violations = list(violations)
        msg = "; ".join(f"{v.name}: {v.detail}" for v in self.violations)
        super().__init__(msg or "invalid input")


@dataclass(frozen=True)
class Violation:
    name: str
    detail: str


class NumericalError(NiefError, ArithmeticError):
    name = "NumericalError"


class SingularSaturation(NumericalError):
    name = "SingularSaturation"


class DegenerateDenominator(NumericalError):
    name = "DegenerateDenominator"


class ZeroReference(NumericalError):
    name = "ZeroReference"


class GridTooNarrow(NumericalError):
    name = "GridTooNarrow"


class NonConvergent(NumericalError):
    name = "NonConvergent"


class IllConditioned(NumericalError):
    name = "IllConditioned"


class ToleranceNotMet(NumericalError):
    name = "ToleranceNotMet"


class ZeroWidth(NumericalError):
    name = "ZeroWidth"


class ZeroReferenceA(NumericalError):
    name = "ZeroReferenceA"


class NonHalfInteger(NiefError, ValueError):
    name = "NonHalfInteger"
