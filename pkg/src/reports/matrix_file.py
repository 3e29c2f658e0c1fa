"""Matrix files (YAML ``n`` + row-major ``entries``) and measure specs."""

from __future__ import annotations

import logging
import math
import re

import yaml

from src.core.extended import parse_value
from src.core.matrix import Matrix
from src.core.measure import IdempotentMeasure, make_measure
from src.errors import ParseError, ValidationError

logger = logging.getLogger("idempotent_dynamics")


def _line(node) -> int | None:
    return node.start_mark.line + 1 if node is not None else None


def _field_nodes(root) -> dict:
    if not isinstance(root, yaml.MappingNode):
        return {}
    return {key.value: value for key, value in root.value if isinstance(key, yaml.ScalarNode)}


def parse_matrix_text(text: str) -> Matrix:
    try:
        root = yaml.compose(text, Loader=yaml.SafeLoader)
        data = yaml.safe_load(text)
    except yaml.YAMLError as e:
        mark = getattr(e, "problem_mark", None)
        raise ParseError(f"malformed document: {getattr(e, 'problem', e)}",
                         line=mark.line + 1 if mark else None) from None
    if not isinstance(data, dict):
        raise ParseError("expected a mapping with fields 'n' and 'entries'", line=1)
    nodes = _field_nodes(root)

    for name in ("n", "entries"):
        if name not in data:
            raise ParseError("missing field", line=1, field=name)
    n = data["n"]
    if isinstance(n, bool) or not isinstance(n, int):
        raise ParseError(f"expected an integer, got {n!r}", line=_line(nodes.get("n")), field="n")
    if n < 2:
        raise ParseError(f"dimension must be at least 2, got {n}", line=_line(nodes.get("n")), field="n")

    entries = data["entries"]
    entries_node = nodes.get("entries")
    if not isinstance(entries, list):
        raise ParseError("expected a list of numbers", line=_line(entries_node), field="entries")
    if len(entries) != n * n:
        raise ParseError(f"expected {n * n} entries for n = {n}, got {len(entries)}",
                         line=_line(entries_node), field="entries")
    item_nodes = entries_node.value if isinstance(entries_node, yaml.SequenceNode) else [None] * len(entries)
    values = []
    for k, (value, node) in enumerate(zip(entries, item_nodes)):
        field = f"entries[{k}]"
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ParseError(f"not a number: {value!r}", line=_line(node), field=field)
        if not math.isfinite(value):
            raise ParseError(f"matrix entries must be finite, got {value!r}", line=_line(node), field=field)
        values.append(float(value))
    return Matrix.from_rows([values[i * n:(i + 1) * n] for i in range(n)])


def read_matrix_file(path: str) -> tuple[str, Matrix]:
    """Return the raw text (for the input digest) and the parsed matrix."""
    with open(path, "r") as f:
        text = f.read()
    A = parse_matrix_text(text)
    logger.debug("Read %dx%d matrix from %s", A.n, A.n, path)
    return text, A


def dump_matrix(A: Matrix) -> str:
    return yaml.safe_dump({"n": A.n, "entries": A.flat()}, default_flow_style=None, sort_keys=False)


def write_matrix_file(path: str, A: Matrix) -> None:
    with open(path, "w") as f:
        f.write(dump_matrix(A))


def parse_measure_spec(text: str) -> IdempotentMeasure:
    """Comma- or space-separated tokens: decimals ≤ 0 or ``-inf``."""
    tokens = [t for t in re.split(r"[,\s]+", text.strip()) if t]
    if not tokens:
        raise ParseError("empty measure", field="x0")
    values = [parse_value(t, field=f"x0[{k}]") for k, t in enumerate(tokens)]
    try:
        return make_measure(values)
    except ValidationError as e:
        raise ParseError(str(e), field="x0") from None
