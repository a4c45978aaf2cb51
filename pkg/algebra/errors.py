from __future__ import annotations

from typing import Any, Optional, Tuple


class AlgebraError(Exception):
    """Base class for every error raised by the algebra package."""


class ArityMismatch(AlgebraError, ValueError):
    pass


class UniverseMismatch(AlgebraError, ValueError):
    pass


class ValueEscapesWindow(AlgebraError):
    """A value left the finite window an operation is evaluated in."""

    def __init__(self, args_tuple: Tuple[Any, ...], value: Any, message: Optional[str] = None) -> None:
        self.args_tuple = tuple(args_tuple)
        self.value = value
        super().__init__(message or f"value {value!r} at {self.args_tuple!r} escapes the window")


class BudgetExceeded(AlgebraError):
    """A computation grew past its configured budget.

    This is a verdict about the size of the object, not a defect of the
    input. ``partial`` holds whatever was computed before the cap was hit.
    """

    def __init__(self, budget: int, reached: int, what: str = "fragment", partial: Any = None) -> None:
        self.budget = budget
        self.reached = reached
        self.what = what
        self.partial = partial
        super().__init__(f"{what} exceeds budget {budget} (reached {reached})")


class WindowTooSmall(AlgebraError):
    def __init__(self, required: int, size: int) -> None:
        self.required = required
        self.size = size
        super().__init__(f"bound {required} does not fit into a window of size {size}")


__all__ = [
    "AlgebraError",
    "ArityMismatch",
    "UniverseMismatch",
    "ValueEscapesWindow",
    "BudgetExceeded",
    "WindowTooSmall",
]
