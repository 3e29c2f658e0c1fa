"""Class II matrices as weighted permutations: A_π ↔ π."""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from src.core.matrix import Matrix, matmul
from src.core.permutation import Permutation, compose, cycle_decomposition
from src.errors import DimensionMismatchError, NotClassIIError
from src.rules.classifier import ClassII, classify

logger = logging.getLogger("idempotent_dynamics")


@dataclass(frozen=True)
class CompositionCheck:
    product: Matrix
    law_holds: bool


@dataclass(frozen=True)
class CycleProduct:
    """One cycle of π with Q = product of the entries read along it."""

    cycle: tuple[int, ...]
    product: float

    @property
    def length(self) -> int:
        return len(self.cycle)


def extract_permutation(A: Matrix) -> Permutation:
    """π(i) = the unique column j with a_ij > 0."""
    result = classify(A)
    if not isinstance(result, ClassII):
        raise NotClassIIError(f"matrix is {result.label}, not class2")
    return result.permutation


def weights(A: Matrix, pi: Permutation) -> np.ndarray:
    """The positive entries a_{i,π(i)} in row order."""
    return np.array([A.entries[i - 1, pi(i) - 1] for i in range(1, A.n + 1)])


def compose_check(A_pi: Matrix, A_tau: Matrix) -> CompositionCheck:
    """Multiply A_π A_τ and confirm the product is A_{τπ}."""
    if A_pi.n != A_tau.n:
        raise DimensionMismatchError(A_pi.n, A_tau.n, what="matrix")
    pi = extract_permutation(A_pi)
    tau = extract_permutation(A_tau)
    product = matmul(A_pi, A_tau)
    result = classify(product)
    law_holds = isinstance(result, ClassII) and result.permutation == compose(tau, pi)
    if not law_holds:
        logger.warning("Composition law failed for π=%s, τ=%s", pi, tau)
    return CompositionCheck(product, law_holds)


def matrix_power_class2(A: Matrix, m: int) -> Matrix:
    """A^m = A_{π^m}, built entry by entry from cycle products.

    Entry (i, π^m(i)) is Q^s times the first r factors along the cycle of i,
    where m = k·s + r and k is the cycle length.
    """
    if m < 1:
        raise ValueError("power must be a positive integer")
    pi = extract_permutation(A)
    entries = np.zeros((A.n, A.n))
    for cp in cycle_products(A, pi):
        k = cp.length
        s, r = divmod(m, k)
        for i in cp.cycle:
            value = cp.product ** s
            j = i
            for _ in range(r):
                value *= A.entries[j - 1, pi(j) - 1]
                j = pi(j)
            entries[i - 1, j - 1] = value
    return Matrix(entries)


def inverse_class2(A: Matrix) -> Matrix:
    """A_π⁻¹ = A_{π⁻¹} with entry 1 / a_{i,π(i)} at (π(i), i)."""
    pi = extract_permutation(A)
    entries = np.zeros((A.n, A.n))
    for i in range(1, A.n + 1):
        entries[pi(i) - 1, i - 1] = 1.0 / A.entries[i - 1, pi(i) - 1]
    return Matrix(entries)


def cycle_products(A: Matrix, pi: Permutation | None = None) -> list[CycleProduct]:
    if pi is None:
        pi = extract_permutation(A)
    result = []
    for cycle in cycle_decomposition(pi).cycles:
        q = 1.0
        for i in cycle:
            q *= float(A.entries[i - 1, pi(i) - 1])
        result.append(CycleProduct(cycle, q))
    return result
