"""Fixed-point sets Fix(A) = {x ∈ I_n : A x = x}.

Both classes describe Fix(A) as a cone: x = −Σ α_p g^{(p)} with α_p ≥ 0,
plus coordinates pinned to 0 and, for Class II operators whose cycles all
have product 1, the anchor rule that some α_p must vanish.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np
from scipy.optimize import nnls

from src.analysis.linalg import (
    CramerRay,
    RANK_RELATIVE_TOLERANCE,
    cramer_ray,
    determinant,
    eliminate,
)
from src.analysis.permutation_matrix import cycle_products
from src.core.extended import NegInf
from src.core.matrix import Matrix, apply, distance_inf
from src.core.measure import MEASURE_TOLERANCE, IdempotentMeasure, make_measure
from src.errors import (
    AnchorViolationError,
    DimensionMismatchError,
    LengthMismatchError,
    NotApplicableError,
    NotClassIError,
    NotClassIIError,
    SolverLimitError,
    ValidationError,
)
from src.rules.classifier import ClassI, ClassII, classify

logger = logging.getLogger("idempotent_dynamics")

DET_RELATIVE_TOLERANCE = 1e-9
UNIT_TOLERANCE = 1e-9
COEFFICIENT_TOLERANCE = 1e-9
RAY_ENUMERATION_LIMIT = 16


class FixedPointKind(str, Enum):
    UNIQUE_ZERO = "unique_zero"
    CONE = "cone"


@dataclass(frozen=True)
class FixedPointSet:
    n: int
    kind: FixedPointKind
    generators: tuple[tuple[float, ...], ...]
    requires_zero_anchor: bool
    forced_zero_coords: frozenset[int]
    regime: str

    def generator_supports(self) -> list[frozenset[int]]:
        return [frozenset(i + 1 for i, v in enumerate(g) if v != 0) for g in self.generators]

    def contains(self, x: Sequence, tol: float = 1e-9) -> bool:
        """Membership of a finite point in the described set."""
        if len(x) != self.n:
            raise DimensionMismatchError(self.n, len(x))
        if any(isinstance(v, NegInf) for v in x):
            return False
        point = np.array([float(v) for v in x])
        if np.any(point > tol) or point.max() < -tol:
            return False
        if any(abs(point[i - 1]) > tol for i in self.forced_zero_coords):
            return False
        if not self.generators:
            return bool(np.all(np.abs(point) <= tol))
        G = np.array(self.generators, dtype=float).T
        alphas, residual = nnls(G, -point)
        if residual > tol * np.sqrt(self.n) * max(1.0, float(np.max(np.abs(point)))):
            return False
        if self.requires_zero_anchor and np.all(alphas > tol):
            return False
        return True

    def equivalent(self, other: "FixedPointSet", tol: float = 1e-9) -> bool:
        """Same kind, pinned coordinates, anchor rule and generators up to scaling."""
        if (self.n, self.kind, self.requires_zero_anchor) != (other.n, other.kind, other.requires_zero_anchor):
            return False
        if self.forced_zero_coords != other.forced_zero_coords:
            return False
        if len(self.generators) != len(other.generators):
            return False
        remaining = [np.array(g) for g in other.generators]
        for g in self.generators:
            match = next((k for k, h in enumerate(remaining) if np.max(np.abs(np.array(g) - h)) <= tol), None)
            if match is None:
                return False
            remaining.pop(match)
        return True

    def to_record(self) -> dict:
        return {
            "kind": self.kind.value,
            "regime": self.regime,
            "generators": [list(g) for g in self.generators],
            "requires_zero_anchor": self.requires_zero_anchor,
            "forced_zero_coords": sorted(self.forced_zero_coords),
        }


@dataclass(frozen=True)
class ReducedSystem:
    """The system M x = 0 on the non-zero-row coordinates, M = B − I."""

    kept_indices: tuple[int, ...]
    M: np.ndarray
    rank: int
    determinant: float
    ray: CramerRay | None

    @property
    def n0(self) -> int:
        return len(self.kept_indices)

    def cofactor_record(self) -> dict | None:
        if self.ray is None:
            return None
        kept = self.kept_indices
        return {
            "free_index": kept[self.ray.free_col],
            "leading_det": self.ray.leading_det,
            "coefficients": {str(kept[c]): d for c, d in zip(self.ray.basic_cols, self.ray.coefficients)},
        }


def _unique_zero(n: int, forced: frozenset[int], regime: str) -> FixedPointSet:
    return FixedPointSet(n, FixedPointKind.UNIQUE_ZERO, (), False, forced, regime)


def _normalized(vector: np.ndarray) -> tuple[float, ...]:
    top = float(np.max(vector))
    return tuple(float(v) / top + 0.0 for v in vector)


def _class1(A: Matrix) -> ClassI:
    result = classify(A)
    if not isinstance(result, ClassI):
        raise NotClassIError(f"matrix is {result.label}, not class1")
    return result


def invariant_face(A: Matrix) -> frozenset[int]:
    """Coordinates (zero rows) that are 0 after one step and stay 0."""
    return _class1(A).zero_rows


def reduce_system(A: Matrix, rank_relative_tol: float = RANK_RELATIVE_TOLERANCE) -> ReducedSystem:
    zero_rows = invariant_face(A)
    kept = tuple(i for i in range(1, A.n + 1) if i not in zero_rows)
    M = A.minor(kept) - np.eye(len(kept))
    if not kept:
        return ReducedSystem(kept, M, 0, 1.0, None)
    elimination = eliminate(M, rank_relative_tol)
    ray = cramer_ray(M, elimination) if elimination.rank == len(kept) - 1 else None
    return ReducedSystem(kept, M, elimination.rank, determinant(M), ray)


def fixed_points_class1(A: Matrix, det_relative_tol: float = DET_RELATIVE_TOLERANCE,
                        rank_relative_tol: float = RANK_RELATIVE_TOLERANCE,
                        coefficient_tol: float = COEFFICIENT_TOLERANCE) -> FixedPointSet:
    """Fix(A) for a Class I operator.

    Zero-row coordinates are pinned to 0; the rest solve (B − I) x = 0 with
    x ≤ 0. A corank-one system gives a single ray x_i = −d_i · x_f, which is
    feasible only if no d_i is positive.
    """
    system = reduce_system(A, rank_relative_tol)
    forced = invariant_face(A)
    n0 = system.n0
    if n0 == 0:
        return _unique_zero(A.n, forced, "no_free_rows")

    scale = float(np.max(np.abs(system.M)))
    tol_det = det_relative_tol * scale ** n0
    if abs(system.determinant) > tol_det or system.rank == n0:
        logger.debug("Reduced system nonsingular (det=%g)", system.determinant)
        return _unique_zero(A.n, forced, "nonsingular")

    if system.rank == n0 - 1:
        d = np.array(system.ray.coefficients)
        cut = coefficient_tol * max(1.0, float(np.max(np.abs(d)))) if len(d) else 0.0
        if np.any(d > cut):
            logger.debug("Ray coefficients %s change sign: unique fixed point", d)
            return _unique_zero(A.n, forced, "corank_one")
        direction = system.ray.direction(n0)
        direction[np.abs(direction) <= cut] = 0.0
        generator = _embed(A.n, system.kept_indices, direction)
        return FixedPointSet(A.n, FixedPointKind.CONE, (generator,), False, forced, "corank_one")

    threshold = rank_relative_tol * scale
    rays = extreme_rays(system.M, threshold, coefficient_tol)
    if not rays:
        return _unique_zero(A.n, forced, "higher_corank")
    generators = tuple(_embed(A.n, system.kept_indices, r) for r in rays)
    logger.debug("Higher-corank cone with %d extreme rays", len(generators))
    return FixedPointSet(A.n, FixedPointKind.CONE, generators, False, forced, "higher_corank")


def _embed(n: int, kept: Sequence[int], vector: np.ndarray) -> tuple[float, ...]:
    full = np.zeros(n)
    for k, i in enumerate(kept):
        full[i - 1] = vector[k]
    return _normalized(full)


def extreme_rays(M: np.ndarray, threshold: float, coefficient_tol: float = COEFFICIENT_TOLERANCE) -> list[np.ndarray]:
    """Extreme rays of {g ≥ 0 : M g = 0}.

    A support S carries an extreme ray exactly when M restricted to the
    columns in S has a one-dimensional null space spanned by a strictly
    positive vector.
    """
    cols = M.shape[1]
    if cols > RAY_ENUMERATION_LIMIT:
        raise SolverLimitError(f"extreme-ray enumeration limited to n0 <= {RAY_ENUMERATION_LIMIT}")
    rays = []
    for size in range(1, cols + 1):
        for support in itertools.combinations(range(cols), size):
            sub = M[:, support]
            elimination = eliminate(sub, absolute_tol=threshold)
            if elimination.rank != size - 1:
                continue
            vector = np.ones(1) if size == 1 else cramer_ray(sub, elimination).direction(size)
            cut = coefficient_tol * float(np.max(np.abs(vector)))
            if np.all(vector > cut):
                pass
            elif np.all(vector < -cut):
                vector = -vector
            else:
                continue
            full = np.zeros(cols)
            full[list(support)] = vector / np.max(vector)
            rays.append(full)
    return rays


def fixed_points_class2(A: Matrix, unit_tol: float = UNIT_TOLERANCE) -> FixedPointSet:
    """Fix(A_π) from the cycle products of π.

    Cycles with product ≠ 1 pin their coordinates to 0; each unit cycle
    contributes one generator, anchored at 1 on its smallest index and
    propagated by x_i = a_{i,π(i)} x_{π(i)}.
    """
    result = classify(A)
    if not isinstance(result, ClassII):
        raise NotClassIIError(f"matrix is {result.label}, not class2")
    pi = result.permutation
    generators = []
    forced: set[int] = set()
    products = cycle_products(A, pi)
    for cp in products:
        if abs(cp.product - 1.0) > unit_tol:
            forced.update(cp.cycle)
            continue
        g = np.zeros(A.n)
        value = 1.0
        g[cp.cycle[0] - 1] = value
        for i in cp.cycle[:-1]:
            value /= A.entries[i - 1, pi(i) - 1]
            g[pi(i) - 1] = value
        generators.append(_normalized(g))
    anchor = bool(generators) and len(generators) == len(products)
    logger.debug("Class II fixed points: %d of %d cycles are unit cycles", len(generators), len(products))
    if not generators:
        return _unique_zero(A.n, frozenset(forced), "cycle_products")
    return FixedPointSet(A.n, FixedPointKind.CONE, tuple(generators), anchor, frozenset(forced), "cycle_products")


def fixed_points(A: Matrix, tolerances=None) -> FixedPointSet:
    """Dispatch on the operator class."""
    result = classify(A)
    if isinstance(result, ClassI):
        if tolerances is None:
            return fixed_points_class1(A)
        return fixed_points_class1(A, tolerances.det_relative, tolerances.rank_relative, tolerances.coefficient)
    if isinstance(result, ClassII):
        return fixed_points_class2(A, UNIT_TOLERANCE if tolerances is None else tolerances.unit)
    raise NotApplicableError("fixed points are only described for class1 and class2 operators")


def is_fixed_point(A: Matrix, x: Sequence, tol: float) -> bool:
    """A x = x within ``tol``; −∞ coordinates must match exactly."""
    if len(x) != A.n:
        raise DimensionMismatchError(A.n, len(x))
    if tol <= 0:
        raise ValidationError("tolerance must be positive")
    return distance_inf(apply(A, x), x) <= tol


def fixed_points_n3_oracle(A: Matrix, det_relative_tol: float = DET_RELATIVE_TOLERANCE,
                           tol: float = UNIT_TOLERANCE) -> FixedPointSet:
    """Closed form for n = 3 with exactly one zero row.

    In the frame where the zero row is last: a ray {(cα, α, 0)} with
    c = a12 / (1 − a11) when det(B − I) = 0 and a11 < 1; the quadrant
    {(α, β, 0)} when B = I; the origin otherwise.

    Only valid when det(B − I) ≠ 0, a11 < 1 or B = I. A singular B − I
    with a11 ≥ 1 and B ≠ I (say a11 > 1, a12 = 0, a22 = 1, whose fixed
    points are the ray (0, α, 0)) falls through to the origin; use
    :func:`fixed_points_class1` there.
    """
    if A.n != 3:
        raise NotApplicableError("the closed form covers n = 3 only")
    result = classify(A)
    if not isinstance(result, ClassI) or len(result.zero_rows) != 1:
        raise NotApplicableError("the closed form needs a class1 matrix with exactly one zero row")
    p, q = (i for i in (1, 2, 3) if i not in result.zero_rows)
    forced = result.zero_rows
    a11, a12 = A.entry(p, p), A.entry(p, q)
    a21, a22 = A.entry(q, p), A.entry(q, q)
    det2 = (a11 - 1.0) * (a22 - 1.0) - a12 * a21
    scale = max(abs(a11 - 1.0), abs(a12), abs(a21), abs(a22 - 1.0))
    if abs(det2) <= det_relative_tol * scale ** 2 and a11 < 1.0 - tol:
        c = a12 / (1.0 - a11)
        g = np.zeros(3)
        g[p - 1] = c
        g[q - 1] = 1.0
        return FixedPointSet(3, FixedPointKind.CONE, (_normalized(g),), False, forced, "n3_ray")
    if (abs(a12) <= tol and abs(a21) <= tol and abs(a11 - 1.0) <= tol and abs(a22 - 1.0) <= tol):
        e_p = tuple(1.0 if i == p else 0.0 for i in (1, 2, 3))
        e_q = tuple(1.0 if i == q else 0.0 for i in (1, 2, 3))
        return FixedPointSet(3, FixedPointKind.CONE, (e_p, e_q), False, forced, "n3_plane")
    return _unique_zero(3, forced, "n3_origin")


def sample_fixed_point(S: FixedPointSet, alphas: Sequence[float],
                       tol: float = MEASURE_TOLERANCE) -> IdempotentMeasure:
    """x = −Σ α_p g^{(p)} with pinned coordinates set to 0."""
    if len(alphas) != len(S.generators):
        raise LengthMismatchError(f"need {len(S.generators)} weights, got {len(alphas)}")
    if any(a < 0 for a in alphas):
        raise ValidationError("weights must be non-negative")
    if S.requires_zero_anchor and all(a > 0 for a in alphas):
        raise AnchorViolationError("at least one weight must be 0 when every cycle is a unit cycle")
    x = np.zeros(S.n)
    for a, g in zip(alphas, S.generators):
        x -= a * np.array(g)
    for i in S.forced_zero_coords:
        x[i - 1] = 0.0
    return make_measure(x, tol=tol)
