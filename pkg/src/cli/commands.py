"""One function per subcommand; each returns a Report."""

from __future__ import annotations

import logging

from src.analysis.fixpoint import fixed_points, fixed_points_n3_oracle, reduce_system
from src.analysis.graph import build_graph, cycles_and_longest_path, neg_inf_fate
from src.analysis.permutation_matrix import cycle_products
from src.core.extended import vector_to_json
from src.core.matrix import Matrix
from src.dynamics.omega import OmegaSettings, omega_from_trajectory
from src.dynamics.predictor import predict_limit_class2
from src.dynamics.simulator import simulate
from src.dynamics.spectrum import class1_asymptotics
from src.errors import NotClassifiedError, ValidationError
from src.reports.exporters import write_graph_dot, write_trajectory_csv
from src.reports.matrix_file import parse_measure_spec, read_matrix_file
from src.reports.report import Report, input_digest
from src.rules.classifier import ClassI, ClassII, Neither, OperatorClass, classify
from src.services.campaign_engine import CampaignEngine
from src.utils.config import Tolerances

logger = logging.getLogger("idempotent_dynamics")

EXIT_VERIFICATION_FAILED = 4


def classification_record(result: OperatorClass, A: Matrix) -> dict:
    if isinstance(result, Neither):
        return result.to_record(A)
    return result.to_record()


def _require_invariant(result: OperatorClass, what: str) -> None:
    if isinstance(result, Neither):
        raise NotClassifiedError(f"{what} needs a class1 or class2 operator; matrix is neither "
                                 f"({result.reason.kind.value})")


def cmd_classify(matrix_path: str) -> Report:
    text, A = read_matrix_file(matrix_path)
    result = classify(A)
    return Report("classify", input_digest(text), classification_record(result, A))


def cmd_fixed_points(matrix_path: str, tolerances: Tolerances) -> Report:
    text, A = read_matrix_file(matrix_path)
    result = classify(A)
    report = Report("fixed-points", input_digest(text, tolerances), classification_record(result, A))
    _require_invariant(result, "fixed-points")
    S = fixed_points(A, tolerances)
    report.results["fixed_points"] = S.to_record()

    if isinstance(result, ClassII):
        report.results["cycle_products"] = [
            {"cycle": list(cp.cycle), "product": cp.product} for cp in cycle_products(A)
        ]
        return report

    system = reduce_system(A, tolerances.rank_relative)
    report.results["reduced_system"] = {
        "kept_indices": list(system.kept_indices),
        "rank": system.rank,
        "determinant": system.determinant,
        "cramer": system.cofactor_record(),
    }
    if A.n == 3:
        if len(result.zero_rows) == 1:
            oracle = fixed_points_n3_oracle(A, tolerances.det_relative, tolerances.unit)
            agrees = S.equivalent(oracle, tolerances.default)
            report.results["oracle"] = {"fixed_points": oracle.to_record(), "agrees": agrees}
            if not agrees:
                report.warn(f"closed form ({oracle.regime}) disagrees with the general solver ({S.regime})")
        else:
            report.results["oracle"] = None
            report.warn("closed form needs exactly one zero row; skipped")
    return report


def cmd_simulate(matrix_path: str, x0_spec: str, steps: int, csv_path: str | None,
                 tol: float, settings: OmegaSettings) -> Report:
    text, A = read_matrix_file(matrix_path)
    x0 = parse_measure_spec(x0_spec)
    result = classify(A)
    report = Report("simulate", input_digest(text, x0_spec, steps, tol), classification_record(result, A))
    _require_invariant(result, "simulate")
    if steps < 0:
        raise ValidationError("--steps must be non-negative")
    trajectory = simulate(A, x0, steps, settings.saturation_floor)
    omega = omega_from_trajectory(trajectory, tol, settings)
    report.results = {
        "x0": vector_to_json(x0.coords),
        "steps": steps,
        "final": vector_to_json(trajectory.final),
        "omega": omega.to_record(),
        "saturated": [e.to_record() for e in trajectory.saturated],
    }
    if trajectory.saturated:
        report.warn(f"saturation: finite values fell below {settings.saturation_floor:g} "
                    f"from step {trajectory.first_saturation}")
    if csv_path:
        write_trajectory_csv(csv_path, trajectory)
        report.results["csv"] = csv_path
    return report


def cmd_predict(matrix_path: str, x0_spec: str, tolerances: Tolerances, max_sweeps: int = 10_000,
                max_dimension: int = 32) -> Report:
    text, A = read_matrix_file(matrix_path)
    x0 = parse_measure_spec(x0_spec)
    result = classify(A)
    report = Report("predict", input_digest(text, x0_spec, tolerances), classification_record(result, A))
    _require_invariant(result, "predict")
    if len(x0) != A.n:
        raise ValidationError(f"x0 has {len(x0)} coordinates, matrix has dimension {A.n}")
    report.results["x0"] = vector_to_json(x0.coords)
    if isinstance(result, ClassII):
        report.results["limits"] = predict_limit_class2(A, x0, tolerances.unit).to_record()
    elif isinstance(result, ClassI):
        asymptotics = class1_asymptotics(A, tolerances.unit, max_sweeps=max_sweeps, max_dimension=max_dimension)
        report.results["asymptotics"] = asymptotics.to_record()
        report.results["invariant_face"] = sorted(result.zero_rows)
        if asymptotics.low_confidence:
            report.warn("low_confidence: eigenvalue radius and Gelfand estimate disagree")
    report.results["neg_inf_fate"] = neg_inf_fate(A, x0.neg_inf_coords).to_record()
    return report


def cmd_graph(matrix_path: str, dot_path: str | None, enumeration_limit: int = 12) -> Report:
    text, A = read_matrix_file(matrix_path)
    result = classify(A)
    report = Report("graph", input_digest(text), classification_record(result, A))
    _require_invariant(result, "graph")
    G = build_graph(A)
    cycles = cycles_and_longest_path(G, enumeration_limit)
    report.results = {"graph": G.to_record(), **cycles.to_record()}
    if not cycles.exhaustive:
        report.warn("cycle list is one certificate per strongly connected component")
    if dot_path:
        write_graph_dot(dot_path, G)
        report.results["dot"] = dot_path
    return report


def cmd_verify(engine: CampaignEngine, matrix_paths: list[str], random_kind: str | None,
               n: int | None, cases: int, seed: int, tol: float, unit_cycles: bool = False) -> Report:
    if bool(matrix_paths) == bool(random_kind):
        raise ValidationError("give either matrix files or --random, not both")
    if random_kind:
        if n is None:
            raise ValidationError("--random needs --n")
        batch, generator = engine.random_cases(random_kind, n, cases, seed, unit_cycles)
        digest = input_digest(random_kind, n, cases, seed, tol, unit_cycles, engine.steps)
    else:
        operators = []
        texts = []
        for path in matrix_paths:
            text, A = read_matrix_file(path)
            _require_invariant(classify(A), "verify")
            texts.append(text)
            operators.append((path, A))
        batch, generator = engine.file_cases(operators, cases, seed)
        digest = input_digest(*texts, cases, seed, tol, engine.steps)
    summary = engine.run(batch, generator, tol)
    report = Report("verify", digest, results=summary.to_record())
    if not summary.passed:
        report.exit_code = EXIT_VERIFICATION_FAILED
        report.warn(f"{len(summary.failed)} of {len(summary.results)} cases failed")
    return report
