"""Empirical ω-limit verdicts read off a simulated trajectory."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum

import numpy as np

from src.core.extended import ExtendedReal, NegInf, vector_to_json
from src.core.matrix import Matrix, distance_inf
from src.core.measure import IdempotentMeasure
from src.dynamics.simulator import SATURATION_FLOOR, Trajectory, simulate
from src.errors import ValidationError
from src.rules.classifier import ClassII, classify

logger = logging.getLogger("idempotent_dynamics")

DIVERGENCE_THRESHOLD = -1e8
DIVERGENCE_WINDOW = 100
STABLE_WINDOW = 10
STABLE_PERIODS = 10


class OmegaKind(str, Enum):
    CONVERGED = "converged"
    PERIODIC = "periodic"
    DIVERGING = "diverging_to_neg_inf"
    UNDECIDED = "undecided"


@dataclass(frozen=True)
class OmegaEstimate:
    kind: OmegaKind
    steps: int
    point: tuple[ExtendedReal, ...] | None = None
    period: int | None = None
    points: tuple[tuple[ExtendedReal, ...], ...] = ()
    coords: frozenset[int] = frozenset()

    def to_record(self) -> dict:
        record = {"verdict": self.kind.value, "steps": self.steps}
        if self.kind is OmegaKind.CONVERGED:
            record["point"] = vector_to_json(self.point)
        elif self.kind is OmegaKind.PERIODIC:
            record["period"] = self.period
            record["points"] = [vector_to_json(p) for p in self.points]
        elif self.kind is OmegaKind.DIVERGING:
            record["coords"] = sorted(self.coords)
        return record


@dataclass(frozen=True)
class OmegaSettings:
    divergence_threshold: float = DIVERGENCE_THRESHOLD
    divergence_window: int = DIVERGENCE_WINDOW
    stable_window: int = STABLE_WINDOW
    stable_periods: int = STABLE_PERIODS
    saturation_floor: float = SATURATION_FLOOR

    @classmethod
    def from_config(cls, config: dict) -> "OmegaSettings":
        section = config.get("dynamics", {}) or {}
        return cls(
            divergence_threshold=float(section.get("divergence_threshold", DIVERGENCE_THRESHOLD)),
            divergence_window=int(section.get("divergence_window", DIVERGENCE_WINDOW)),
            stable_window=int(section.get("stable_window", STABLE_WINDOW)),
            stable_periods=int(section.get("stable_periods", STABLE_PERIODS)),
            saturation_floor=float(section.get("saturation_floor", SATURATION_FLOOR)),
        )


def period_window(A: Matrix) -> int:
    """Largest period searched: the order of π for Class II, n² otherwise."""
    result = classify(A)
    if isinstance(result, ClassII):
        return result.permutation.order()
    return A.n ** 2


def sample_stride(A: Matrix) -> int:
    """Steps between comparable points: the order of π for Class II, else 1."""
    result = classify(A)
    return result.permutation.order() if isinstance(result, ClassII) else 1


def seed_support(trajectory: Trajectory, step: int | None = None) -> frozenset[int]:
    """−∞ coordinates at ``step`` (default: the final step) that the −∞ seeds of x0 alone explain."""
    entries = trajectory.operator.entries
    mask = np.array([isinstance(v, NegInf) for v in trajectory.points[0]], dtype=bool)
    for _ in range(trajectory.steps if step is None else step):
        if not mask.any():
            break
        mask = np.any(entries[:, mask] > 0, axis=1)
    return frozenset(int(i) + 1 for i in np.flatnonzero(mask))


def _diverging_at(trajectory: Trajectory, m: int, stride: int, settings: OmegaSettings) -> set[int]:
    points = trajectory.points
    point = points[m]
    seeded = seed_support(trajectory, m)
    coords = set()
    for i in range(1, len(point) + 1):
        value = point[i - 1]
        if isinstance(value, NegInf):
            # anything the seeds cannot explain came from saturation
            if i not in seeded:
                coords.add(i)
            continue
        if value >= settings.divergence_threshold or m < stride:
            continue
        if not value < points[m - stride][i - 1]:
            continue
        start = max(stride, m - settings.divergence_window + stride)
        if all(points[k][i - 1] <= points[k - stride][i - 1] for k in range(start, m + 1)):
            coords.add(i)
    return coords


def _diverging(trajectory: Trajectory, stride: int, settings: OmegaSettings) -> frozenset[int]:
    """Union of the diverging coordinates over the last ``stride`` steps, one full period of π."""
    M = trajectory.steps
    coords = set()
    for m in range(max(0, M - stride + 1), M + 1):
        coords |= _diverging_at(trajectory, m, stride, settings)
    return frozenset(coords)


def omega_from_trajectory(trajectory: Trajectory, tol: float,
                          settings: OmegaSettings | None = None) -> OmegaEstimate:
    settings = settings or OmegaSettings()
    A = trajectory.operator
    points = trajectory.points
    M = trajectory.steps

    diverging = _diverging(trajectory, sample_stride(A), settings)
    if diverging:
        logger.debug("Coordinates %s diverge to -inf", sorted(diverging))
        return OmegaEstimate(OmegaKind.DIVERGING, M, coords=diverging)

    window = settings.stable_window
    if M >= window and all(
        distance_inf(points[m + 1], points[m]) < tol for m in range(M - window, M)
    ):
        return OmegaEstimate(OmegaKind.CONVERGED, M, point=trajectory.final)

    for k in range(1, period_window(A) + 1):
        span = settings.stable_periods * k
        if M < span:
            break
        if all(distance_inf(points[m + k], points[m]) < tol for m in range(M - span, M - k + 1)):
            return OmegaEstimate(OmegaKind.PERIODIC, M, period=k, points=tuple(points[M - k + 1:]))
    return OmegaEstimate(OmegaKind.UNDECIDED, M)


def omega_estimate(A: Matrix, x0: IdempotentMeasure, max_steps: int, tol: float,
                   settings: OmegaSettings | None = None) -> OmegaEstimate:
    """Classify the tail of the trajectory of x0 under A."""
    if tol <= 0:
        raise ValidationError("tolerance must be positive")
    settings = settings or OmegaSettings()
    trajectory = simulate(A, x0, max_steps, settings.saturation_floor)
    return omega_from_trajectory(trajectory, tol, settings)
