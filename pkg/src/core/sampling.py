"""Seeded random operators and measures.

All generators draw from a ``numpy.random.Generator`` built on PCG64 so
campaigns are reproducible from their seed alone.
"""

from __future__ import annotations

import logging

import numpy as np

from src.core.builders import generalized_permutation
from src.core.extended import NEG_INF
from src.core.matrix import Matrix
from src.core.measure import IdempotentMeasure, make_measure
from src.core.permutation import Permutation, cycle_decomposition

logger = logging.getLogger("idempotent_dynamics")

RNG_ALGORITHM = "numpy.PCG64"

CLASS1_ENTRY_RANGE = (0.0, 2.0)
CLASS2_LOG_RANGE = (0.25, 4.0)


def make_rng(seed: int | None) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def random_class1(rng: np.random.Generator, n: int, zero_rows: int | None = None,
                  density: float = 1.0) -> Matrix:
    """Non-negative matrix with ``zero_rows`` ∈ [1, n−1] identically zero rows.

    Remaining entries are uniform on [0, 2]; with ``density`` < 1 each entry
    is independently zeroed with probability 1 − density.
    """
    if zero_rows is None:
        zero_rows = int(rng.integers(1, n))
    entries = rng.uniform(*CLASS1_ENTRY_RANGE, size=(n, n))
    if density < 1.0:
        entries *= rng.random((n, n)) < density
    rows = rng.choice(n, size=zero_rows, replace=False)
    entries[rows, :] = 0.0
    return Matrix(entries)


def random_contracting_class1(rng: np.random.Generator, n: int, radius: float = 0.9) -> Matrix:
    """Class I matrix whose kept minor has row sums ≤ ``radius`` (< 1)."""
    entries = random_class1(rng, n).entries.copy()
    sums = entries.sum(axis=1)
    scale = np.where(sums > 0, radius * rng.uniform(0.2, 1.0, size=n) / np.maximum(sums, 1e-300), 0.0)
    return Matrix(entries * scale[:, None])


def random_acyclic_class1(rng: np.random.Generator, n: int) -> Matrix:
    """Class I matrix whose pseudograph has no directed cycle.

    Under a random relabeling the matrix is strictly lower triangular, so
    its first row in that order is a zero row.
    """
    order = rng.permutation(n)
    entries = np.zeros((n, n))
    for a in range(n):
        for b in range(a):
            if rng.random() < 0.6:
                entries[order[a], order[b]] = rng.uniform(0.1, 2.0)
    return Matrix(entries)


def random_permutation(rng: np.random.Generator, n: int) -> Permutation:
    return Permutation(tuple(int(v) + 1 for v in rng.permutation(n)))


def random_class2(rng: np.random.Generator, n: int, unit_cycle_probability: float = 0.0,
                  pi: Permutation | None = None) -> Matrix:
    """Random A_π with entries log-uniform on [0.25, 4].

    Each cycle is rescaled to product exactly 1 (by adjusting its first
    entry) with probability ``unit_cycle_probability``.
    """
    if pi is None:
        pi = random_permutation(rng, n)
    low, high = np.log(CLASS2_LOG_RANGE[0]), np.log(CLASS2_LOG_RANGE[1])
    weights = np.exp(rng.uniform(low, high, size=n))
    for cycle in cycle_decomposition(pi).cycles:
        if unit_cycle_probability > 0 and rng.random() < unit_cycle_probability:
            head = cycle[0] - 1
            rest = float(np.prod([weights[i - 1] for i in cycle[1:]])) if len(cycle) > 1 else 1.0
            weights[head] = 1.0 / rest
    return generalized_permutation(pi, [float(w) for w in weights])


def random_neither(rng: np.random.Generator, n: int) -> Matrix:
    """A matrix that violates both Class I and Class II conditions."""
    kind = int(rng.integers(3))
    if kind == 0:
        entries = rng.uniform(-1.0, 2.0, size=(n, n))
        i, j = rng.integers(n, size=2)
        entries[i, j] = -rng.uniform(0.1, 1.0)
        return Matrix(entries)
    if kind == 1:
        entries = rng.uniform(0.0, 2.0, size=(n, n))
        entries[entries < 0.5] = 0.0
        for i in range(n):
            if np.count_nonzero(entries[i]) == 0:
                entries[i, rng.integers(n)] = 1.0
        row = rng.integers(n)
        cols = rng.choice(n, size=2, replace=False)
        entries[row, cols] = rng.uniform(0.5, 2.0, size=2)
        return Matrix(entries)
    # single positive entry per row, at least one column hit twice
    targets = rng.integers(n, size=n)
    if len(set(targets.tolist())) == n:
        targets[0] = targets[1]
    entries = np.zeros((n, n))
    entries[np.arange(n), targets] = rng.uniform(0.25, 4.0, size=n)
    return Matrix(entries)


def random_measure(rng: np.random.Generator, n: int, neg_inf_probability: float = 0.0,
                   low: float = -5.0) -> IdempotentMeasure:
    """Random point of I_n with one anchored zero coordinate."""
    values: list = list(rng.uniform(low, 0.0, size=n))
    anchor = int(rng.integers(n))
    values[anchor] = 0.0
    if neg_inf_probability > 0:
        for i in range(n):
            if i != anchor and rng.random() < neg_inf_probability:
                values[i] = NEG_INF
    return make_measure(values)


def random_neg_inf_seed(rng: np.random.Generator, n: int) -> IdempotentMeasure:
    """Random measure with at least one −∞ coordinate (n ≥ 2)."""
    x = list(random_measure(rng, n).coords)
    zero = x.index(0.0)
    candidates = [i for i in range(n) if i != zero]
    count = int(rng.integers(1, len(candidates) + 1))
    for i in rng.choice(candidates, size=count, replace=False):
        x[int(i)] = NEG_INF
    return make_measure(x)
