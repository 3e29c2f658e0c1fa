"""Dense real matrices acting on extended-real vectors."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from src.core.extended import (
    INFINITE,
    NEG_INF,
    ExtendedReal,
    NegInf,
    to_extended,
)
from src.errors import DimensionMismatchError, ExtendedArithmeticError, InvalidMatrixError


@dataclass(frozen=True, eq=False)
class Matrix:
    """An n×n matrix of finite reals, a_ij = row i, column j (n ≥ 2).

    ``entries`` is stored as a read-only float64 array.
    """

    entries: np.ndarray

    def __post_init__(self):
        array = np.array(self.entries, dtype=float, copy=True)
        if array.ndim != 2 or array.shape[0] != array.shape[1]:
            raise InvalidMatrixError(f"matrix must be square, got shape {array.shape}")
        if array.shape[0] < 2:
            raise InvalidMatrixError("matrix dimension must be at least 2")
        if not np.all(np.isfinite(array)):
            raise InvalidMatrixError("matrix entries must be finite")
        array += 0.0  # fold -0.0
        array.setflags(write=False)
        object.__setattr__(self, "entries", array)

    @classmethod
    def from_rows(cls, rows: Iterable[Sequence[float]]) -> "Matrix":
        return cls(np.array([list(r) for r in rows], dtype=float))

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls(np.eye(n))

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    def entry(self, i: int, j: int) -> float:
        """a_ij with 1-based indices."""
        return float(self.entries[i - 1, j - 1])

    def rows(self) -> list[list[float]]:
        return [[float(v) for v in row] for row in self.entries]

    def flat(self) -> list[float]:
        return [float(v) for v in self.entries.ravel()]

    def minor(self, indices: Sequence[int]) -> np.ndarray:
        """Principal submatrix over 1-based ``indices``."""
        idx = [i - 1 for i in indices]
        return self.entries[np.ix_(idx, idx)].copy()

    def __matmul__(self, other: "Matrix") -> "Matrix":
        return matmul(self, other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.entries.shape == other.entries.shape and bool(
            np.array_equal(self.entries, other.entries)
        )

    def __hash__(self) -> int:
        return hash(self.entries.tobytes())

    def __repr__(self) -> str:
        return f"Matrix({self.rows()!r})"


def matmul(left: Matrix, right: Matrix) -> Matrix:
    if left.n != right.n:
        raise DimensionMismatchError(left.n, right.n, what="matrix")
    return Matrix(left.entries @ right.entries)


def split_vector(x: Sequence[ExtendedReal]) -> tuple[np.ndarray, np.ndarray]:
    """Split into (finite values with 0 at −∞ slots, −∞ mask)."""
    coords = [to_extended(v) for v in x]
    mask = np.array([isinstance(v, NegInf) for v in coords], dtype=bool)
    values = np.array([0.0 if isinstance(v, NegInf) else v for v in coords], dtype=float)
    return values, mask


def join_vector(values: np.ndarray, mask: np.ndarray) -> tuple[ExtendedReal, ...]:
    return tuple(NEG_INF if m else float(v) + 0.0 for v, m in zip(values, mask))


def apply(A: Matrix, x: Sequence[ExtendedReal]) -> tuple[ExtendedReal, ...]:
    """y_i = Σ_j a_ij ⊗ x_j under the extended-real conventions.

    The result is returned raw; whether it lies in I_n is the classifier's
    concern.
    """
    if len(x) != A.n:
        raise DimensionMismatchError(A.n, len(x))
    values, mask = split_vector(x)
    y = A.entries @ values
    if not mask.any():
        return join_vector(y, mask)
    hits = A.entries[:, mask]
    if np.any(hits < 0):
        raise ExtendedArithmeticError("negative coefficient multiplies a -inf coordinate")
    return join_vector(y, np.any(hits > 0, axis=1))


def distance_inf(x: Sequence[ExtendedReal], y: Sequence[ExtendedReal]) -> float:
    """max_i |x_i − y_i| with |−∞ − (−∞)| = 0 and |finite − (−∞)| = INFINITE."""
    if len(x) != len(y):
        raise DimensionMismatchError(len(x), len(y))
    worst = 0.0
    for a, b in zip(x, y):
        a_inf = isinstance(a, NegInf)
        b_inf = isinstance(b, NegInf)
        if a_inf and b_inf:
            continue
        if a_inf or b_inf:
            return INFINITE
        worst = max(worst, abs(float(a) - float(b)))
    return worst


def is_finite_vector(x: Sequence[ExtendedReal]) -> bool:
    return not any(isinstance(v, NegInf) for v in x)


def max_abs(x: Sequence[ExtendedReal]) -> float:
    finite = [abs(float(v)) for v in x if not isinstance(v, NegInf)]
    if len(finite) != len(x):
        return math.inf
    return max(finite, default=0.0)
