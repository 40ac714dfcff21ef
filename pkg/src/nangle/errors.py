"""Exception types shared across the package."""

from __future__ import annotations


class NotExactError(ValueError):
    """A sequence expected to be exact is not."""

    def __init__(self, message: str, position: int | None = None, degree: int | None = None):
        super().__init__(message)
        self.position = position
        self.degree = degree


class NotMorphismError(ValueError):
    """Components do not form a morphism of sequences."""

    def __init__(self, message: str, square: int | None = None):
        super().__init__(message)
        self.square = square


class ConstructionError(RuntimeError):
    """A verification inside a construction failed.

    ``step`` names the stage of the construction, ``equation`` the first
    violated identity (index or short description) and ``witness`` maps
    names to the values involved, ready for serialization.
    """

    def __init__(self, step: str, equation, witness: dict | None = None):
        super().__init__(f"{step}: failed check {equation}")
        self.step = step
        self.equation = equation
        self.witness = witness or {}


class BudgetExceeded(RuntimeError):
    """A search ran out of budget before deciding the question."""
