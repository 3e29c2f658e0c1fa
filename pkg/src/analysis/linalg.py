"""Small dense linear algebra: elimination with complete pivoting, rank,
independent row/column selection and Cramer-rule rays."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

RANK_RELATIVE_TOLERANCE = 1e-9


@dataclass(frozen=True)
class Elimination:
    rank: int
    pivot_rows: tuple[int, ...]
    pivot_cols: tuple[int, ...]
    threshold: float


def eliminate(M: np.ndarray, relative_tol: float = RANK_RELATIVE_TOLERANCE,
              absolute_tol: float | None = None) -> Elimination:
    """Gaussian elimination with complete pivoting.

    Pivots below ``relative_tol · max|M|`` (or ``absolute_tol`` when given)
    count as zero. Returned pivot rows/columns are indices into ``M``
    (0-based) and select a nonsingular rank×rank submatrix.
    """
    work = np.array(M, dtype=float, copy=True)
    rows, cols = work.shape
    scale = float(np.max(np.abs(work))) if work.size else 0.0
    threshold = relative_tol * scale if absolute_tol is None else absolute_tol
    row_ids = list(range(rows))
    col_ids = list(range(cols))
    rank = 0
    if scale == 0.0:
        return Elimination(0, (), (), threshold)
    for k in range(min(rows, cols)):
        sub = np.abs(work[k:, k:])
        r, c = np.unravel_index(int(np.argmax(sub)), sub.shape)
        if sub[r, c] <= threshold:
            break
        r += k
        c += k
        work[[k, r], :] = work[[r, k], :]
        work[:, [k, c]] = work[:, [c, k]]
        row_ids[k], row_ids[r] = row_ids[r], row_ids[k]
        col_ids[k], col_ids[c] = col_ids[c], col_ids[k]
        factors = work[k + 1:, k] / work[k, k]
        work[k + 1:, k:] -= np.outer(factors, work[k, k:])
        rank += 1
    return Elimination(rank, tuple(sorted(row_ids[:rank])), tuple(sorted(col_ids[:rank])), threshold)


def rank(M: np.ndarray, relative_tol: float = RANK_RELATIVE_TOLERANCE) -> int:
    return eliminate(M, relative_tol).rank


def determinant(M: np.ndarray) -> float:
    if M.shape[0] == 0:
        return 1.0
    return float(np.linalg.det(M))


@dataclass(frozen=True)
class CramerRay:
    """Null direction of a corank-one system, x_basic = −d · x_free.

    ``cofactors[t]`` is det(A_{i f}) for the t-th basic column, where A_{i f}
    is the independent block with that column replaced by the free column;
    ``leading_det`` is det of the independent block.
    """

    basic_cols: tuple[int, ...]
    free_col: int
    pivot_rows: tuple[int, ...]
    cofactors: tuple[float, ...]
    leading_det: float

    @property
    def coefficients(self) -> tuple[float, ...]:
        """d_i = det(A_{i f}) / det(A_r)."""
        return tuple(c / self.leading_det for c in self.cofactors)

    def direction(self, size: int) -> np.ndarray:
        """Null vector with x_free = 1."""
        vector = np.zeros(size)
        vector[self.free_col] = 1.0
        for col, d in zip(self.basic_cols, self.coefficients):
            vector[col] = -d
        return vector


def cramer_ray(M: np.ndarray, elimination: Elimination) -> CramerRay:
    """Solve M x = 0 when rank(M) = cols − 1 by Cramer's rule.

    The independent rows and columns come from the pivoting, which realizes
    the usual "assume the first r rows are independent" relabeling.
    """
    cols = M.shape[1]
    basic = elimination.pivot_cols
    free = [c for c in range(cols) if c not in basic]
    if len(free) != 1:
        raise ValueError(f"system has corank {len(free)}, expected 1")
    free_col = free[0]
    rows = list(elimination.pivot_rows)
    block = M[np.ix_(rows, list(basic))]
    leading = determinant(block)
    cofactors = []
    for t in range(len(basic)):
        replaced = block.copy()
        replaced[:, t] = M[rows, free_col]
        cofactors.append(determinant(replaced))
    return CramerRay(tuple(basic), free_col, tuple(rows), tuple(cofactors), leading)
