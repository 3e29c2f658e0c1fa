from __future__ import annotations

import logging
from dataclasses import dataclass, field

from src.core.extended import NEG_INF, ExtendedReal, NegInf
from src.core.matrix import Matrix, apply
from src.core.measure import IdempotentMeasure
from src.errors import DimensionMismatchError, NotClassifiedError, ValidationError
from src.rules.classifier import Neither, classify

logger = logging.getLogger("idempotent_dynamics")

SATURATION_FLOOR = -1e300


@dataclass(frozen=True)
class SaturationEvent:
    step: int
    coord: int

    def to_record(self) -> dict:
        return {"step": self.step, "coord": self.coord}


@dataclass(frozen=True)
class Trajectory:
    """x^(0), …, x^(M) with x^(m+1) = A x^(m)."""

    operator: Matrix
    points: tuple[tuple[ExtendedReal, ...], ...]
    saturated: tuple[SaturationEvent, ...] = field(default=())

    @property
    def steps(self) -> int:
        return len(self.points) - 1

    @property
    def final(self) -> tuple[ExtendedReal, ...]:
        return self.points[-1]

    @property
    def first_saturation(self) -> int | None:
        return min((e.step for e in self.saturated), default=None)

    def saturated_coords(self) -> frozenset[int]:
        return frozenset(e.coord for e in self.saturated)


def _saturate(y, step: int, floor: float, events: list[SaturationEvent]) -> tuple[ExtendedReal, ...]:
    out = []
    for i, v in enumerate(y, start=1):
        if not isinstance(v, NegInf) and v < floor:
            events.append(SaturationEvent(step, i))
            out.append(NEG_INF)
        else:
            out.append(v)
    return tuple(out)


def simulate(A: Matrix, x0: IdempotentMeasure, steps: int,
             saturation_floor: float = SATURATION_FLOOR) -> Trajectory:
    """Iterate A from x0 exactly, saturating finite underflow to −∞."""
    if isinstance(classify(A), Neither):
        raise NotClassifiedError("trajectories are only simulated for class1 and class2 operators")
    if len(x0) != A.n:
        raise DimensionMismatchError(A.n, len(x0))
    if steps < 0:
        raise ValidationError("steps must be non-negative")
    points = [tuple(x0)]
    events: list[SaturationEvent] = []
    x = points[0]
    for m in range(1, steps + 1):
        x = _saturate(apply(A, x), m, saturation_floor, events)
        points.append(x)
    if events:
        logger.warning("Trajectory saturated to -inf at %d coordinate steps (first at step %d)",
                       len(events), events[0].step)
    return Trajectory(A, tuple(points), tuple(events))
