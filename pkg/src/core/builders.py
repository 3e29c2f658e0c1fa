"""Constructors for the reference operators used in golden tests and reports."""

from __future__ import annotations

from typing import Sequence

import numpy as np

from src.core.matrix import Matrix
from src.core.permutation import Permutation
from src.errors import ValidationError


def generalized_permutation(pi: Permutation, weights: Sequence[float]) -> Matrix:
    """A_π with a_{i,π(i)} = weights[i-1] > 0 and zeros elsewhere."""
    if len(weights) != pi.n:
        raise ValidationError(f"need {pi.n} weights, got {len(weights)}")
    if any(w <= 0 for w in weights):
        raise ValidationError("generalized permutation weights must be positive")
    entries = np.zeros((pi.n, pi.n))
    for i in range(1, pi.n + 1):
        entries[i - 1, pi(i) - 1] = weights[i - 1]
    return Matrix(entries)


def two_cycle_with_loop(alpha: float, beta: float, gamma: float, delta: float, eta: float) -> Matrix:
    """5×5 operator with π = (1 2)(3 5)(4)."""
    return Matrix.from_rows([
        [0, alpha, 0, 0, 0],
        [beta, 0, 0, 0, 0],
        [0, 0, 0, 0, gamma],
        [0, 0, 0, delta, 0],
        [0, 0, eta, 0, 0],
    ])


def single_zero_row(a11: float, a12: float) -> Matrix:
    """2×2 Class I operator [[a11, a12], [0, 0]]."""
    return Matrix.from_rows([[a11, a12], [0, 0]])


def swap(a12: float, a21: float) -> Matrix:
    """2×2 Class II operator [[0, a12], [a21, 0]]."""
    return Matrix.from_rows([[0, a12], [a21, 0]])


def single_zero_row_power(a11: float, a12: float, m: int) -> np.ndarray:
    """Closed form of [[a11, a12], [0, 0]]^m for m ≥ 1."""
    return np.array([[a11 ** m, a11 ** (m - 1) * a12], [0.0, 0.0]])


def swap_power(a12: float, a21: float, m: int) -> np.ndarray:
    """Closed form of [[0, a12], [a21, 0]]^m, split by the parity of m."""
    s, r = divmod(m, 2)
    if r == 0:
        return np.array([[(a12 * a21) ** s, 0.0], [0.0, (a21 * a12) ** s]])
    return np.array([
        [0.0, a12 ** (s + 1) * a21 ** s],
        [a12 ** s * a21 ** (s + 1), 0.0],
    ])


def with_zero_rows(minor: Sequence[Sequence[float]], n: int, kept: Sequence[int]) -> Matrix:
    """Embed ``minor`` on the 1-based ``kept`` rows/columns of an n×n matrix.

    Rows outside ``kept`` are zero rows; columns outside ``kept`` are left 0.
    """
    entries = np.zeros((n, n))
    idx = [k - 1 for k in kept]
    entries[np.ix_(idx, idx)] = np.asarray(minor, dtype=float)
    return Matrix(entries)


def cycle_table_operator(two_cycle_unit: bool, three_five_unit: bool, loop_unit: bool,
                         scale: float = 2.0) -> Matrix:
    """The 5×5 operator with each cycle product either exactly 1 or not.

    Non-unit cycles alternate between growing (product scale²) and
    shrinking (product 1/scale²) so both sides of 1 are exercised.
    """
    alpha, beta = (scale, 1.0 / scale) if two_cycle_unit else (scale, scale)
    gamma, eta = (1.0 / scale, scale) if three_five_unit else (1.0 / scale, 1.0 / scale)
    delta = 1.0 if loop_unit else 1.0 / scale
    return two_cycle_with_loop(alpha, beta, gamma, delta, eta)


CYCLE_TABLE_REGIMES = [
    (False, False, False),
    (True, False, False),
    (False, True, False),
    (False, False, True),
    (True, True, False),
    (True, False, True),
    (False, True, True),
    (True, True, True),
]
