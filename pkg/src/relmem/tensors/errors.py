"""
Exceptions raised by the tensor operations.
"""

from __future__ import annotations


class ShapeError(ValueError):
    """
    Raised when the input shapes of an operation are incompatible.
    """

    def __init__(self, op: str, shapes: list[tuple[int, ...]], detail: str = ""):
        self.op = op
        self.shapes = shapes
        message = f"Shape mismatch in '{op}': {shapes}"
        if detail:
            message += f" ({detail})"
        super().__init__(message)


class DomainError(ValueError):
    """
    Raised when an operation is evaluated outside of its domain,
    e.g. the logarithm of a nonpositive value.
    """

    def __init__(self, op: str, detail: str):
        self.op = op
        super().__init__(f"Domain error in '{op}': {detail}")


class NonFiniteError(FloatingPointError):
    """
    Raised when an operation produces NaN or Inf values.
    """

    def __init__(self, op: str):
        self.op = op
        super().__init__(f"Non-finite values produced by '{op}'.")
