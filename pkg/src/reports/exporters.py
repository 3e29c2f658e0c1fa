from __future__ import annotations

import csv
import io
import logging

from src.analysis.graph import Pseudograph
from src.core.extended import format_value
from src.dynamics.simulator import Trajectory

logger = logging.getLogger("idempotent_dynamics")


def trajectory_csv(trajectory: Trajectory) -> str:
    """Header ``step,x1,…,xn``; −∞ written as ``-inf``."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    n = trajectory.operator.n
    writer.writerow(["step"] + [f"x{i}" for i in range(1, n + 1)])
    for m, point in enumerate(trajectory.points):
        writer.writerow([m] + [format_value(v) for v in point])
    return buffer.getvalue()


def write_trajectory_csv(path: str, trajectory: Trajectory) -> None:
    with open(path, "w", newline="") as f:
        f.write(trajectory_csv(trajectory))
    logger.info("Wrote %d trajectory rows to %s", len(trajectory.points), path)


def write_graph_dot(path: str, graph: Pseudograph) -> None:
    with open(path, "w") as f:
        f.write(graph.to_dot())
    logger.info("Wrote DOT graph to %s", path)
