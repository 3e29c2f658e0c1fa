from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Iterable, Iterator

from src.core.extended import ExtendedReal, NegInf, format_value, to_extended
from src.errors import MaxNotZeroError, PositiveCoordinateError, TooShortError

logger = logging.getLogger("idempotent_dynamics")

MEASURE_TOLERANCE = 1e-12


@dataclass(frozen=True)
class IdempotentMeasure:
    """A point of I_n: coordinates in R ∪ {−∞}, all ≤ 0, maximum exactly 0.

    Build instances with :func:`make_measure`; the constructor does not
    validate.
    """

    coords: tuple[ExtendedReal, ...]

    @property
    def n(self) -> int:
        return len(self.coords)

    def __len__(self) -> int:
        return len(self.coords)

    def __iter__(self) -> Iterator[ExtendedReal]:
        return iter(self.coords)

    def __getitem__(self, index: int) -> ExtendedReal:
        return self.coords[index]

    @property
    def neg_inf_coords(self) -> frozenset[int]:
        """1-based indices of the −∞ coordinates."""
        return frozenset(i + 1 for i, v in enumerate(self.coords) if isinstance(v, NegInf))

    @property
    def is_finite(self) -> bool:
        return not any(isinstance(v, NegInf) for v in self.coords)

    def tokens(self) -> list[str]:
        return [format_value(v) for v in self.coords]

    def __str__(self) -> str:
        return "(" + ", ".join(self.tokens()) + ")"


def simplex_violation(values: Iterable[ExtendedReal], tol: float = 0.0) -> str | None:
    """Describe why ``values`` is not in I_n, or return None if it is."""
    coords = [to_extended(v) for v in values]
    for i, v in enumerate(coords):
        if not isinstance(v, NegInf) and v > tol:
            return f"coordinate {i + 1} is positive ({v!r})"
    maximum = max(coords)
    if isinstance(maximum, NegInf) or maximum < -tol:
        return f"maximum coordinate is {format_value(maximum)}, not 0"
    return None


def in_simplex(values: Iterable[ExtendedReal], tol: float = 0.0) -> bool:
    return simplex_violation(values, tol) is None


def make_measure(raw: Iterable, tol: float = 0.0) -> IdempotentMeasure:
    """Validate ``raw`` and return it as an :class:`IdempotentMeasure`.

    ``tol`` is 0 for user-constructed inputs; computed vectors are checked
    with a small tolerance (default :data:`MEASURE_TOLERANCE` at call sites).
    """
    coords = tuple(to_extended(v) for v in raw)
    if len(coords) < 2:
        raise TooShortError(len(coords))
    for i, v in enumerate(coords):
        if not isinstance(v, NegInf) and v > tol:
            raise PositiveCoordinateError(i + 1, v)
    maximum = max(coords)
    if isinstance(maximum, NegInf) or maximum < -tol:
        raise MaxNotZeroError(format_value(maximum))
    return IdempotentMeasure(coords)
