"""Exception hierarchy shared by the library and the CLI.

Each exception carries the process exit code the CLI reports for it.
"""

from __future__ import annotations


class IdempotentDynamicsError(Exception):
    """Base class for every error raised by this package."""

    exit_code = 1


class ValidationError(IdempotentDynamicsError):
    exit_code = 2


class DimensionMismatchError(ValidationError):
    def __init__(self, expected: int, actual: int, what: str = "vector"):
        super().__init__(f"{what} has dimension {actual}, expected {expected}")
        self.expected = expected
        self.actual = actual


class TooShortError(ValidationError):
    def __init__(self, length: int):
        super().__init__(f"an idempotent measure needs at least 2 coordinates, got {length}")
        self.length = length


class PositiveCoordinateError(ValidationError):
    def __init__(self, index: int, value: float):
        super().__init__(f"coordinate {index} is positive ({value!r})")
        self.index = index
        self.value = value


class MaxNotZeroError(ValidationError):
    def __init__(self, maximum):
        super().__init__(f"maximum coordinate must be 0, got {maximum}")
        self.maximum = maximum


class InvalidMatrixError(ValidationError):
    pass


class ExtendedArithmeticError(ValidationError):
    pass


class LengthMismatchError(ValidationError):
    pass


class AnchorViolationError(ValidationError):
    pass


class ParseError(ValidationError):
    def __init__(self, message: str, line: int | None = None, field: str | None = None):
        location = []
        if line is not None:
            location.append(f"line {line}")
        if field is not None:
            location.append(f"field '{field}'")
        prefix = f"{', '.join(location)}: " if location else ""
        super().__init__(f"{prefix}{message}")
        self.line = line
        self.field = field


class NotClassifiedError(IdempotentDynamicsError):
    """The operator does not map I_n to itself (neither Class I nor Class II)."""

    exit_code = 3


class NotClassIError(NotClassifiedError):
    pass


class NotClassIIError(NotClassifiedError):
    pass


class NotApplicableError(NotClassifiedError):
    pass


class RootFindingFailedError(IdempotentDynamicsError):
    pass


class SolverLimitError(IdempotentDynamicsError):
    pass
