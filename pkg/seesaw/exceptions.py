"""
Exception hierarchy for the seesaw toolkit.

Every failure the library raises on purpose derives from SeesawError so the
CLI can map it to a validation exit code without catching programming errors.
"""

from dataclasses import dataclass
from typing import List, Sequence


class SeesawError(Exception):
    """Base class for all deliberate toolkit failures."""


class DomainError(SeesawError, ValueError):
    """A scalar function received an argument outside its domain."""


@dataclass(frozen=True)
class Violation:
    """
    One failed model assumption.

    Attributes:
        field: Parameter name the check applies to
        value: Offending value as supplied
        bound: Human-readable bound that was violated (e.g. "sigma > 0")
        assumption: Slug naming the modelling assumption being enforced
    """

    field: str
    value: object
    bound: str
    assumption: str

    def __str__(self) -> str:
        return f"{self.field}={self.value!r} violates {self.bound} [{self.assumption}]"

    def to_dict(self) -> dict:
        return {
            "field": self.field,
            "value": self.value,
            "bound": self.bound,
            "assumption": self.assumption,
        }


class AssumptionViolationError(SeesawError, ValueError):
    """A model bundle failed validation; carries every violation found."""

    def __init__(self, violations: Sequence[Violation]):
        self.violations: List[Violation] = list(violations)
        joined = "; ".join(str(v) for v in self.violations)
        super().__init__(f"{len(self.violations)} assumption violation(s): {joined}")


class HypothesisError(SeesawError, ValueError):
    """A closed-form result was requested outside the region where it holds."""

    def __init__(self, condition: str, bound: str, detail: str = ""):
        self.condition = condition
        self.bound = bound
        message = f"hypothesis '{condition}' failed: requires {bound}"
        if detail:
            message = f"{message} ({detail})"
        super().__init__(message)


class BracketError(SeesawError, ValueError):
    """numeric_argmax could not locate an interior maximum in the bracket."""


class IngestHeaderError(SeesawError, ValueError):
    """Historical CSV is missing its header or a required column."""


class RecommendationRefused(SeesawError):
    """Estimated parameters do not support a hurdle recommendation."""

    def __init__(self, conditions: Sequence[str]):
        self.conditions: List[str] = list(conditions)
        super().__init__("recommendation refused: " + "; ".join(self.conditions))
