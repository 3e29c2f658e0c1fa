"""Limits of Class II trajectories from cycle products.

For i on cycle p of length k with product Q and m = k·s + r,

    x_i^(m) = Q^s · (∏_{j<r} a_{π^j(i) π^{j+1}(i)}) · x0_{π^r(i)}.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum

from src.analysis.permutation_matrix import cycle_products, extract_permutation
from src.core.extended import NEG_INF, ExtendedReal, NegInf, ext_mul, vector_to_json
from src.core.matrix import Matrix
from src.core.measure import IdempotentMeasure
from src.errors import DimensionMismatchError, ValidationError

logger = logging.getLogger("idempotent_dynamics")

UNIT_TOLERANCE = 1e-9


class Verdict(str, Enum):
    TO_ZERO = "to_zero"
    TO_NEG_INF = "to_neg_inf"
    PERIODIC = "periodic"


@dataclass(frozen=True)
class CoordinateLimit:
    coord: int
    verdict: Verdict
    period: int
    residue_values: tuple[ExtendedReal, ...]
    cycle_index: int
    cycle_product: float

    def to_record(self) -> dict:
        record = {
            "coord": self.coord,
            "verdict": self.verdict.value,
            "cycle_index": self.cycle_index,
            "cycle_product": self.cycle_product,
            "period": self.period,
            "residue_values": vector_to_json(self.residue_values),
        }
        return record


@dataclass(frozen=True)
class LimitPrediction:
    coordinates: tuple[CoordinateLimit, ...]

    def __getitem__(self, coord: int) -> CoordinateLimit:
        """1-based lookup."""
        return self.coordinates[coord - 1]

    def to_record(self) -> list[dict]:
        return [c.to_record() for c in self.coordinates]


def _prefix(A: Matrix, pi, i: int, r: int) -> tuple[float, int]:
    """(∏_{j<r} a_{π^j(i) π^{j+1}(i)}, π^r(i))."""
    product = 1.0
    j = i
    for _ in range(r):
        product *= float(A.entries[j - 1, pi(j) - 1])
        j = pi(j)
    return product, j


def closed_form_class2(A: Matrix, x0, m: int) -> tuple[ExtendedReal, ...]:
    """x^(m) evaluated without iterating."""
    if m < 0:
        raise ValidationError("step must be non-negative")
    if len(x0) != A.n:
        raise DimensionMismatchError(A.n, len(x0))
    pi = extract_permutation(A)
    values: list[ExtendedReal] = [0.0] * A.n
    for cp in cycle_products(A, pi):
        s, r = divmod(m, cp.length)
        for i in cp.cycle:
            prefix, j = _prefix(A, pi, i, r)
            start = x0[j - 1]
            # Q^s may overflow; a zero start stays 0 regardless
            values[i - 1] = 0.0 if start == 0.0 else ext_mul(cp.product ** s * prefix, start)
    return tuple(values)


def predict_limit_class2(A: Matrix, x0: IdempotentMeasure, unit_tol: float = UNIT_TOLERANCE) -> LimitPrediction:
    """Per-coordinate limit of the subsequences x_i^(k s + r), s → ∞.

    −∞ coordinates of x0 travel around their cycle, so they show up as
    periodic −∞ residues whatever Q is.
    """
    if len(x0) != A.n:
        raise DimensionMismatchError(A.n, len(x0))
    pi = extract_permutation(A)
    limits: list[CoordinateLimit | None] = [None] * A.n
    for p, cp in enumerate(cycle_products(A, pi)):
        k, Q = cp.length, cp.product
        for i in cp.cycle:
            residues = []
            for r in range(k):
                prefix, j = _prefix(A, pi, i, r)
                start = x0[j - 1]
                if abs(Q - 1.0) <= unit_tol:
                    residues.append(ext_mul(prefix, start))
                elif isinstance(start, NegInf):
                    residues.append(NEG_INF)
                elif Q < 1.0 or start == 0.0:
                    residues.append(0.0)
                else:
                    residues.append(NEG_INF)
            residues = tuple(residues)
            has_neg_inf = any(isinstance(v, NegInf) for v in residues)
            if abs(Q - 1.0) <= unit_tol:
                verdict = Verdict.PERIODIC
            elif Q < 1.0:
                verdict = Verdict.PERIODIC if has_neg_inf else Verdict.TO_ZERO
            else:
                verdict = Verdict.TO_NEG_INF if has_neg_inf else Verdict.TO_ZERO
            limits[i - 1] = CoordinateLimit(i, verdict, k, residues, p, Q)
    logger.debug("Class II prediction: %s", [c.verdict.value for c in limits])
    return LimitPrediction(tuple(limits))
