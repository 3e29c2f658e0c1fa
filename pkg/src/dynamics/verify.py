"""Differential check of one (A, x0) case: predictions against simulation."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

from src.analysis.fixpoint import fixed_points, invariant_face, is_fixed_point, sample_fixed_point
from src.analysis.graph import Disappears, neg_inf_fate
from src.core.extended import ExtendedReal, NegInf, format_value, vector_to_json
from src.core.matrix import Matrix, distance_inf, is_finite_vector, max_abs
from src.core.measure import IdempotentMeasure
from src.dynamics.omega import OmegaEstimate, OmegaKind, OmegaSettings, omega_from_trajectory, sample_stride
from src.dynamics.predictor import Verdict, closed_form_class2, predict_limit_class2
from src.dynamics.simulator import Trajectory, simulate
from src.dynamics.spectrum import SpectrumVerdict, class1_asymptotics
from src.errors import RootFindingFailedError, SolverLimitError, ValidationError
from src.rules.classifier import ClassI, ClassII, classify
from src.utils.config import Tolerances

logger = logging.getLogger("idempotent_dynamics")

CLOSED_FORM_HORIZON = 200
ZERO_LIMIT = 1e-6
LIMIT_TOLERANCE = 1e-6


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    coord: int | None = None
    detail: str = ""
    first_divergent_step: int | None = None
    inconclusive: bool = False

    def to_record(self) -> dict:
        return {
            "name": self.name,
            "coord": self.coord,
            "passed": self.passed,
            "inconclusive": self.inconclusive,
            "detail": self.detail,
            "first_divergent_step": self.first_divergent_step,
        }


@dataclass
class VerificationReport:
    operator: Matrix
    x0: IdempotentMeasure
    steps: int
    tol: float
    operator_class: str
    omega: OmegaEstimate | None = None
    checks: list[Check] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def reproduction(self) -> dict:
        return {
            "n": self.operator.n,
            "entries": self.operator.flat(),
            "x0": self.x0.tokens(),
            "steps": self.steps,
            "tol": self.tol,
        }

    def to_record(self, include_checks: bool = True) -> dict:
        record = {
            "class": self.operator_class,
            "passed": self.passed,
            "n_checks": len(self.checks),
            "n_failed": len(self.failures),
            "n_inconclusive": sum(1 for c in self.checks if c.inconclusive),
            "omega": self.omega.to_record() if self.omega else None,
        }
        if include_checks:
            record["checks"] = [c.to_record() for c in self.checks]
        else:
            record["failures"] = [c.to_record() for c in self.failures]
        if not self.passed:
            record["reproduction"] = self.reproduction()
        return record


def _close(a: ExtendedReal, b: ExtendedReal, tol: float) -> bool:
    if isinstance(a, NegInf) or isinstance(b, NegInf):
        return isinstance(a, NegInf) and isinstance(b, NegInf)
    return abs(float(a) - float(b)) <= tol * max(1.0, abs(float(b)))


def _check_closed_form(trajectory: Trajectory, x0, tol: float) -> list[Check]:
    A = trajectory.operator
    horizon = min(trajectory.steps, CLOSED_FORM_HORIZON)
    saturation = trajectory.first_saturation
    if saturation is not None:
        horizon = min(horizon, saturation - 1)
    first_bad: dict[int, int] = {}
    for m in range(horizon + 1):
        expected = closed_form_class2(A, x0, m)
        for i, (got, want) in enumerate(zip(trajectory.points[m], expected), start=1):
            if i not in first_bad and not _close(got, want, tol):
                first_bad[i] = m
    checks = []
    for i in range(1, A.n + 1):
        if i in first_bad:
            m = first_bad[i]
            detail = (f"step {m}: simulated {format_value(trajectory.points[m][i - 1])}, "
                      f"closed form {format_value(closed_form_class2(A, x0, m)[i - 1])}")
            checks.append(Check("closed_form", False, i, detail, m))
        else:
            checks.append(Check("closed_form", True, i, f"steps 0..{horizon}"))
    return checks


def limit_slack(trajectory: Trajectory) -> float:
    """How far a converged point may still sit from the true limit.

    Uses the geometric decay of the last two stride differences; never
    less than LIMIT_TOLERANCE.
    """
    points = trajectory.points
    M = trajectory.steps
    L = sample_stride(trajectory.operator)
    if M < 2 * L:
        return LIMIT_TOLERANCE
    last = distance_inf(points[M], points[M - L])
    before = distance_inf(points[M - L], points[M - 2 * L])
    if not (0.0 < before < math.inf) or last >= before:
        return LIMIT_TOLERANCE
    ratio = last / before
    return max(LIMIT_TOLERANCE, 10.0 * last * ratio / (1.0 - ratio))


def _magnitude(v: ExtendedReal) -> float:
    return math.inf if isinstance(v, NegInf) else abs(float(v))


def _check_residue(coord: int, r: int, verdict_q: float, limit: ExtendedReal,
                   start: ExtendedReal, steps: list[int], values: list[ExtendedReal],
                   unit_q: bool, tol: float, divergence_threshold: float) -> Check:
    """One subsequence s ↦ x_i^(k s + r) against its predicted limit."""
    label = f"residue {r}"
    if unit_q:
        for s, (m, v) in enumerate(zip(steps, values)):
            if not _close(v, limit, max(tol, 1e-12) * (s + 1)):
                return Check("limit", False, coord, f"{label}: {format_value(v)} != {format_value(limit)}", m)
        return Check("limit", True, coord, f"{label}: periodic value {format_value(limit)}")

    if isinstance(start, NegInf):
        for m, v in zip(steps, values):
            if not isinstance(v, NegInf):
                return Check("limit", False, coord, f"{label}: -inf seed lost", m)
        return Check("limit", True, coord, f"{label}: -inf recurs")

    for prev, (m, v) in zip(values, zip(steps[1:], values[1:])):
        if isinstance(limit, NegInf):
            broke = not (v <= prev)
        else:
            broke = _magnitude(v) > _magnitude(prev) * (1.0 + 1e-12) + 1e-300
        if broke:
            return Check("limit", False, coord, f"{label}: not monotone toward {format_value(limit)}", m)

    last = values[-1]
    if isinstance(limit, NegInf):
        reached = isinstance(last, NegInf) or last < divergence_threshold
    else:
        reached = _magnitude(last) < ZERO_LIMIT
    if not reached:
        return Check("limit", True, coord, f"{label}: limit not reached in {steps[-1]} steps", inconclusive=True)
    return Check("limit", True, coord, f"{label}: tends to {format_value(limit)} (Q={verdict_q:.6g})")


def _check_limits(A: Matrix, x0, trajectory: Trajectory, prediction, tol: float,
                  unit_tol: float, settings: OmegaSettings) -> list[Check]:
    checks = []
    pi = classify(A).permutation
    for limit in prediction.coordinates:
        k = limit.period
        unit_q = abs(limit.cycle_product - 1.0) <= unit_tol
        for r in range(k):
            steps = list(range(r, trajectory.steps + 1, k))
            if len(steps) < 2:
                continue
            values = [trajectory.points[m][limit.coord - 1] for m in steps]
            start = x0[pi.power(r)(limit.coord) - 1]
            checks.append(_check_residue(limit.coord, r, limit.cycle_product, limit.residue_values[r],
                                         start, steps, values, unit_q, tol,
                                         settings.divergence_threshold))
    return checks


def _check_omega_class2(prediction, omega: OmegaEstimate, slack: float) -> Check:
    verdicts = {c.coord: c.verdict for c in prediction.coordinates}
    to_neg_inf = {i for i, v in verdicts.items() if v is Verdict.TO_NEG_INF}
    periodic = [c for c in prediction.coordinates if c.verdict is Verdict.PERIODIC]
    if omega.kind is OmegaKind.UNDECIDED:
        return Check("omega", True, detail="simulation undecided", inconclusive=True)
    if to_neg_inf:
        if omega.kind is OmegaKind.DIVERGING and omega.coords <= to_neg_inf:
            return Check("omega", True, detail=f"diverging coords {sorted(omega.coords)}")
        if omega.kind is OmegaKind.DIVERGING:
            return Check("omega", False, detail=f"unexpected diverging coords {sorted(omega.coords - to_neg_inf)}")
        return Check("omega", True, detail=f"{omega.kind.value} before divergence showed", inconclusive=True)
    if omega.kind is OmegaKind.DIVERGING:
        return Check("omega", False, detail=f"diverging coords {sorted(omega.coords)} not predicted")
    if omega.kind is OmegaKind.CONVERGED:
        for c in periodic:
            if any(not _close(v, c.residue_values[0], slack) for v in c.residue_values):
                return Check("omega", False, c.coord, "converged although residues differ")
        for i, v in verdicts.items():
            if v is Verdict.TO_ZERO and _magnitude(omega.point[i - 1]) > slack:
                return Check("omega", False, i, "converged away from 0")
        return Check("omega", True, detail="converged as predicted")
    period = math.lcm(*[c.period for c in periodic]) if periodic else 1
    if period % omega.period:
        return Check("omega", False, detail=f"period {omega.period} does not divide {period}")
    return Check("omega", True, detail=f"period {omega.period}")


def _check_invariant_face(A: Matrix, trajectory: Trajectory) -> Check:
    face = invariant_face(A)
    for m, point in enumerate(trajectory.points[1:], start=1):
        for i in face:
            if point[i - 1] != 0.0:
                return Check("invariant_face", False, i, f"zero-row coordinate is {format_value(point[i - 1])}", m)
    return Check("invariant_face", True, detail=f"coords {sorted(face)} stay 0")


def _check_spectrum(A: Matrix, x0, omega: OmegaEstimate, tolerances: Tolerances, slack: float) -> Check:
    try:
        asymptotics = class1_asymptotics(A, tolerances.unit)
    except (RootFindingFailedError, SolverLimitError) as e:
        return Check("spectrum", True, detail=str(e), inconclusive=True)
    if asymptotics.verdict is not SpectrumVerdict.ALL_INSIDE or not x0.is_finite:
        return Check("spectrum", True, detail=f"{asymptotics.verdict.value}: no per-point prediction",
                     inconclusive=True)
    if omega.kind is OmegaKind.UNDECIDED:
        return Check("spectrum", True, detail="all inside; simulation undecided", inconclusive=True)
    if omega.kind is OmegaKind.CONVERGED and max_abs(omega.point) <= slack:
        return Check("spectrum", True, detail="all inside; converged to the origin")
    return Check("spectrum", False, detail=f"all inside but simulation is {omega.kind.value}")


def _check_neg_inf_fate(A: Matrix, x0, trajectory: Trajectory) -> Check:
    fate = neg_inf_fate(A, x0.neg_inf_coords)
    horizon = trajectory.steps
    if trajectory.first_saturation is not None:
        horizon = trajectory.first_saturation - 1
    supports = [
        {i for i, v in enumerate(point, start=1) if isinstance(v, NegInf)}
        for point in trajectory.points[: horizon + 1]
    ]
    if isinstance(fate, Disappears):
        for m, support in enumerate(supports):
            if m >= fate.by_step and support:
                return Check("neg_inf_fate", False, detail=f"-inf at {sorted(support)} after step {fate.by_step}",
                             first_divergent_step=m)
        if 0 < fate.by_step <= horizon and not supports[fate.by_step - 1]:
            return Check("neg_inf_fate", False, detail="-inf vanished early",
                         first_divergent_step=fate.by_step - 1)
        return Check("neg_inf_fate", True, detail=f"disappears by step {fate.by_step}")
    for m, support in enumerate(supports):
        if not support:
            return Check("neg_inf_fate", False, detail="-inf vanished although a cycle is reachable",
                         first_divergent_step=m)
    return Check("neg_inf_fate", True, detail=f"persists on cycle {list(fate.reachable_cycle)}")


def _check_fixed_point_limit(A: Matrix, omega: OmegaEstimate, tolerances: Tolerances,
                             slack: float) -> Check | None:
    if omega.kind is not OmegaKind.CONVERGED or not is_finite_vector(omega.point):
        return None
    point = omega.point
    scale = max(1.0, max_abs(point))
    if not is_fixed_point(A, point, slack * scale):
        return Check("fixed_point_limit", False, detail="converged point is not fixed")
    try:
        described = fixed_points(A, tolerances)
    except SolverLimitError as e:
        return Check("fixed_point_limit", True, detail=str(e), inconclusive=True)
    if not described.contains(point, slack * scale):
        return Check("fixed_point_limit", False, detail=f"limit {vector_to_json(point)} outside the described set")
    return Check("fixed_point_limit", True, detail=f"limit lies in the {described.kind.value} set")


def _check_fixed_point_samples(A: Matrix, tolerances: Tolerances, tol: float) -> Check:
    try:
        described = fixed_points(A, tolerances)
    except SolverLimitError as e:
        return Check("fixed_point_samples", True, detail=str(e), inconclusive=True)
    sampled = 0
    for p in range(len(described.generators)):
        alphas = [0.0] * len(described.generators)
        alphas[p] = 1.0
        try:
            x = sample_fixed_point(described, alphas, tolerances.measure)
        except ValidationError:
            continue
        sampled += 1
        if not is_fixed_point(A, x, max(tol, 1e-9)):
            return Check("fixed_point_samples", False, detail=f"generator {p + 1} gives a non-fixed point")
    return Check("fixed_point_samples", True, detail=f"{sampled} sampled points fixed")


def verify(A: Matrix, x0: IdempotentMeasure, steps: int, tol: float,
           tolerances: Tolerances | None = None,
           settings: OmegaSettings | None = None) -> VerificationReport:
    """Run every applicable predictor and compare it with the simulated trajectory."""
    if tol <= 0:
        raise ValidationError("tolerance must be positive")
    tolerances = tolerances or Tolerances()
    settings = settings or OmegaSettings()
    trajectory = simulate(A, x0, steps, settings.saturation_floor)
    omega = omega_from_trajectory(trajectory, tol, settings)
    slack = limit_slack(trajectory)
    result = classify(A)
    report = VerificationReport(A, x0, steps, tol, result.label, omega)

    if isinstance(result, ClassII):
        prediction = predict_limit_class2(A, x0, tolerances.unit)
        report.checks.extend(_check_closed_form(trajectory, x0, tol))
        report.checks.extend(_check_limits(A, x0, trajectory, prediction, tol, tolerances.unit, settings))
        report.checks.append(_check_omega_class2(prediction, omega, slack))
    elif isinstance(result, ClassI):
        report.checks.append(_check_invariant_face(A, trajectory))
        report.checks.append(_check_spectrum(A, x0, omega, tolerances, slack))

    report.checks.append(_check_neg_inf_fate(A, x0, trajectory))
    limit_check = _check_fixed_point_limit(A, omega, tolerances, slack)
    if limit_check is not None:
        report.checks.append(limit_check)
    report.checks.append(_check_fixed_point_samples(A, tolerances, tol))

    if not report.passed:
        logger.warning("Verification failed: %s", [c.name for c in report.failures])
    return report
