"""The directed pseudograph G_A and the fate of −∞ coordinates.

Edge ⟨i, j⟩ is present iff a_ji > 0: a −∞ at coordinate i reaches
coordinate j after one step exactly along these edges.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Iterable, Sequence, Union

import networkx as nx

from src.core.extended import NEG_INF
from src.core.matrix import Matrix
from src.core.measure import IdempotentMeasure, make_measure
from src.errors import NotClassifiedError, ValidationError
from src.rules.classifier import Neither, classify

logger = logging.getLogger("idempotent_dynamics")

CYCLE_ENUMERATION_LIMIT = 12


@dataclass(frozen=True)
class Pseudograph:
    n: int
    edges: frozenset[tuple[int, int]]

    def adjacency(self) -> dict[int, list[int]]:
        result = {v: [] for v in range(1, self.n + 1)}
        for i, j in sorted(self.edges):
            result[i].append(j)
        return result

    def to_networkx(self) -> nx.DiGraph:
        graph = nx.DiGraph()
        graph.add_nodes_from(range(1, self.n + 1))
        graph.add_edges_from(self.edges)
        return graph

    def to_record(self) -> dict:
        return {
            "n": self.n,
            "adjacency": {str(v): targets for v, targets in self.adjacency().items()},
        }

    def to_dot(self) -> str:
        lines = ["digraph G_A {"]
        lines.extend(f"  {v};" for v in range(1, self.n + 1))
        lines.extend(f"  {i} -> {j};" for i, j in sorted(self.edges))
        lines.append("}")
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class CycleReport:
    has_cycle: bool
    cycles: tuple[tuple[int, ...], ...]
    longest_path_len: int | None
    exhaustive: bool = True

    def to_record(self) -> dict:
        return {
            "has_cycle": self.has_cycle,
            "cycles": [list(c) for c in self.cycles],
            "cycles_exhaustive": self.exhaustive,
            "longest_path_len": self.longest_path_len,
        }


@dataclass(frozen=True)
class Disappears:
    by_step: int
    label = "disappears"

    def to_record(self) -> dict:
        return {"fate": self.label, "by_step": self.by_step}


@dataclass(frozen=True)
class Persists:
    reachable_cycle: tuple[int, ...]
    label = "persists"

    def to_record(self) -> dict:
        return {"fate": self.label, "reachable_cycle": list(self.reachable_cycle)}


NegInfFate = Union[Disappears, Persists]


def build_graph(A: Matrix) -> Pseudograph:
    result = classify(A)
    if isinstance(result, Neither):
        raise NotClassifiedError("the pseudograph is only built for class1 and class2 operators")
    edges = frozenset(
        (i, j)
        for i in range(1, A.n + 1)
        for j in range(1, A.n + 1)
        if A.entries[j - 1, i - 1] > 0
    )
    logger.debug("Built pseudograph with %d edges", len(edges))
    return Pseudograph(A.n, edges)


def canonical_cycle(cycle: Sequence[int]) -> tuple[int, ...]:
    """Rotate so the smallest vertex comes first."""
    k = cycle.index(min(cycle))
    return tuple(cycle[k:]) + tuple(cycle[:k])


def _scc_certificates(graph: nx.DiGraph) -> list[tuple[int, ...]]:
    certificates = []
    for component in nx.strongly_connected_components(graph):
        sub = graph.subgraph(component)
        if len(component) == 1 and sub.number_of_edges() == 0:
            continue
        edges = nx.find_cycle(sub, source=min(component))
        certificates.append(canonical_cycle([u for u, _ in edges]))
    return sorted(certificates)


def cycles_and_longest_path(G: Pseudograph, enumeration_limit: int = CYCLE_ENUMERATION_LIMIT) -> CycleReport:
    """Cycles (loops included) or, on a DAG, the longest path in edges."""
    graph = G.to_networkx()
    if nx.is_directed_acyclic_graph(graph):
        return CycleReport(False, (), int(nx.dag_longest_path_length(graph)))
    if G.n <= enumeration_limit:
        cycles = sorted(canonical_cycle(c) for c in nx.simple_cycles(graph))
        return CycleReport(True, tuple(cycles), None)
    logger.info("n=%d above enumeration limit; reporting one cycle per component", G.n)
    return CycleReport(True, tuple(_scc_certificates(graph)), None, exhaustive=False)


def neg_inf_fate(A: Matrix, seed: Iterable[int]) -> NegInfFate:
    """Whether the −∞ coordinates seeded at ``seed`` die out or keep cycling.

    Everything reachable from the seed receives −∞ at some step. If that
    region holds a cycle the −∞ recurs forever; otherwise it has left the
    graph once every path from the seed has been walked.
    """
    seed = frozenset(seed)
    if any(v < 1 or v > A.n for v in seed):
        raise ValidationError(f"seed coordinates must lie in 1..{A.n}")
    if not seed:
        return Disappears(0)
    graph = build_graph(A).to_networkx()
    reachable = set(seed)
    for v in seed:
        reachable |= nx.descendants(graph, v)
    region = graph.subgraph(reachable)
    cycles = _scc_certificates(region)
    if cycles:
        return Persists(cycles[0])
    lengths = _longest_from(region)
    return Disappears(1 + max(lengths[v] for v in seed))


def _longest_from(dag: nx.DiGraph) -> dict[int, int]:
    """Longest path (in edges) starting at each vertex."""
    longest = {}
    for v in reversed(list(nx.topological_sort(dag))):
        longest[v] = max((1 + longest[w] for w in dag.successors(v)), default=0)
    return longest


def u_cycle_vectors(cycle: Sequence[int], n: int) -> list[IdempotentMeasure]:
    """u_j is 0 everywhere except −∞ at the j-th vertex of ``cycle``."""
    if not cycle or len(set(cycle)) != len(cycle):
        raise ValidationError("cycle must be non-empty with distinct vertices")
    if any(v < 1 or v > n for v in cycle):
        raise ValidationError(f"cycle vertices must lie in 1..{n}")
    vectors = []
    for v in cycle:
        coords = [0.0] * n
        coords[v - 1] = NEG_INF
        vectors.append(make_measure(coords))
    return vectors
