from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from enum import Enum
from typing import Union

import numpy as np

from src.core.extended import vector_to_json
from src.core.matrix import Matrix, apply
from src.core.measure import IdempotentMeasure, make_measure, simplex_violation
from src.core.permutation import Permutation
from src.errors import NotApplicableError

logger = logging.getLogger("idempotent_dynamics")

EXHAUSTIVE_WITNESS_LIMIT = 20


class ViolationKind(str, Enum):
    NEGATIVE_ENTRY = "negative_entry"
    MULTI_NONZERO_ROW = "multi_nonzero_row"
    ZERO_COLUMN_NO_ZERO_ROW = "zero_column_no_zero_row"


@dataclass(frozen=True)
class Violation:
    kind: ViolationKind
    row: int | None = None
    column: int | None = None

    def to_record(self) -> dict:
        return {"kind": self.kind.value, "row": self.row, "column": self.column}


@dataclass(frozen=True)
class ClassI:
    """Non-negative with at least one identically zero row."""

    zero_rows: frozenset[int]
    label = "class1"

    def to_record(self) -> dict:
        return {"class": self.label, "zero_rows": sorted(self.zero_rows)}


@dataclass(frozen=True)
class ClassII:
    """Non-negative with exactly one positive entry per row and per column."""

    permutation: Permutation
    label = "class2"

    def to_record(self) -> dict:
        return {
            "class": self.label,
            "permutation": list(self.permutation.images),
            "cycles": self.permutation.cycles().notation(),
        }


@dataclass(frozen=True)
class Neither:
    """Maps some point of I_n outside I_n; ``witness`` is such a point."""

    reason: Violation
    witness: IdempotentMeasure
    label = "neither"

    def to_record(self, A: Matrix | None = None) -> dict:
        record = {
            "class": self.label,
            "reason": self.reason.to_record(),
            "witness": vector_to_json(self.witness.coords),
        }
        if A is not None:
            record["image"] = vector_to_json(apply(A, self.witness))
        return record


OperatorClass = Union[ClassI, ClassII, Neither]


def is_invariant_class(result: OperatorClass) -> bool:
    return isinstance(result, (ClassI, ClassII))


def classify(A: Matrix) -> OperatorClass:
    """Decide whether A maps I_n into itself and, if so, by which condition.

    Entries are compared against exact 0: classification is combinatorial.
    """
    entries = A.entries
    negative = _first_negative(entries)
    if negative is None:
        zero_rows = frozenset(int(i) + 1 for i in np.flatnonzero(~np.any(entries != 0, axis=1)))
        if zero_rows:
            logger.debug("Classified as Class I (zero rows %s)", sorted(zero_rows))
            return ClassI(zero_rows)
        positive = entries > 0
        if np.all(positive.sum(axis=1) == 1) and np.all(positive.sum(axis=0) == 1):
            images = tuple(int(np.flatnonzero(row)[0]) + 1 for row in positive)
            logger.debug("Classified as Class II (permutation %s)", images)
            return ClassII(Permutation(images))
    reason = _violation(entries, negative)
    witness = _witness_for(A, reason)
    logger.debug("Classified as neither: %s", reason.kind.value)
    return Neither(reason, witness)


def witness_violation(A: Matrix) -> IdempotentMeasure:
    """A point x ∈ I_n with A(x) ∉ I_n; only defined when A is in neither class."""
    result = classify(A)
    if not isinstance(result, Neither):
        raise NotApplicableError(f"matrix is {result.label}; it maps I_n into itself")
    return result.witness


def _first_negative(entries: np.ndarray) -> tuple[int, int] | None:
    hits = np.argwhere(entries < 0)
    if len(hits) == 0:
        return None
    # argwhere walks in row-major order, so the first hit is lexicographically smallest
    return int(hits[0][0]) + 1, int(hits[0][1]) + 1


def _violation(entries: np.ndarray, negative: tuple[int, int] | None) -> Violation:
    if negative is not None:
        return Violation(ViolationKind.NEGATIVE_ENTRY, row=negative[0], column=negative[1])
    counts = np.count_nonzero(entries, axis=1)
    multi = np.flatnonzero(counts >= 2)
    if len(multi):
        return Violation(ViolationKind.MULTI_NONZERO_ROW, row=int(multi[0]) + 1)
    zero_columns = np.flatnonzero(~np.any(entries != 0, axis=0))
    return Violation(ViolationKind.ZERO_COLUMN_NO_ZERO_ROW, column=int(zero_columns[0]) + 1)


def _witness_for(A: Matrix, reason: Violation) -> IdempotentMeasure:
    n = A.n
    if reason.kind is ViolationKind.NEGATIVE_ENTRY:
        x = [0.0] * n
        x[reason.column - 1] = -1.0
        return _certified(A, x)
    if reason.kind is ViolationKind.ZERO_COLUMN_NO_ZERO_ROW:
        x = [-1.0] * n
        x[reason.column - 1] = 0.0
        return _certified(A, x)

    # Multi-nonzero row, no zero row: put the zero on a column that no
    # single-entry row points at, so every image coordinate is negative.
    for j0 in range(n):
        x = [-1.0] * n
        x[j0] = 0.0
        if simplex_violation(apply(A, x)) is not None:
            return make_measure(x)
    return _exhaustive_witness(A)


def _certified(A: Matrix, x: list[float]) -> IdempotentMeasure:
    measure = make_measure(x)
    if simplex_violation(apply(A, measure)) is None:
        return _exhaustive_witness(A)
    return measure


def _exhaustive_witness(A: Matrix) -> IdempotentMeasure:
    """Search the sign patterns {0, −1}^n that contain a 0."""
    n = A.n
    if n > EXHAUSTIVE_WITNESS_LIMIT:
        raise NotApplicableError(f"exhaustive witness search limited to n <= {EXHAUSTIVE_WITNESS_LIMIT}")
    logger.warning("Falling back to exhaustive witness search (n=%d)", n)
    for pattern in itertools.product((0.0, -1.0), repeat=n):
        if 0.0 not in pattern:
            continue
        if simplex_violation(apply(A, pattern)) is not None:
            return make_measure(pattern)
    raise NotApplicableError("no violating sign pattern found")
