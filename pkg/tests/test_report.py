import json

from src.analysis.graph import build_graph
from src.core.extended import NEG_INF
from src.core.measure import make_measure
from src.dynamics.simulator import simulate
from src.reports.exporters import trajectory_csv, write_graph_dot, write_trajectory_csv
from src.reports.report import Report, input_digest, render_json, render_text
from tests.mocks import operators


def sample_report():
    report = Report("classify", input_digest(b"n: 2\n"), {"class": "class2", "cycles": "(1 2)"})
    report.results = {"b": [1.0, "-inf"], "a": 2}
    return report


class TestReport:
    def test_json_is_stable(self):
        first = render_json(sample_report())
        assert first == render_json(sample_report())
        assert first.endswith("}\n")
        record = json.loads(first)
        assert record["version"] == "1.0.0"
        assert record["command"] == "classify"
        assert record["timing"] is None
        assert list(record["results"]) == ["a", "b"]

    def test_text_header(self):
        text = render_text(sample_report())
        assert text.startswith("idemdyn 1.0.0 :: classify\n")
        assert "cycles: (1 2)" in text

    def test_warn_dedupes(self):
        report = sample_report()
        report.warn("low confidence")
        report.warn("low confidence")
        assert report.warnings == ["low confidence"]

    def test_input_digest(self):
        assert input_digest("abc", 3) == input_digest(b"abc", 3)
        assert input_digest("ab", "c") != input_digest("a", "bc")
        assert len(input_digest()) == 64


class TestExporters:
    def test_trajectory_csv(self):
        trajectory = simulate(operators.swap(0.5, 0.5), make_measure([NEG_INF, 0]), 2)
        assert trajectory_csv(trajectory) == "step,x1,x2\n0,-inf,0.0\n1,0.0,-inf\n2,-inf,0.0\n"

    def test_write_trajectory_csv(self, tmp_path, contracting_row):
        path = tmp_path / "trajectory.csv"
        write_trajectory_csv(str(path), simulate(contracting_row, make_measure([-1, 0]), 3))
        lines = path.read_text().splitlines()
        assert lines[0] == "step,x1,x2"
        assert lines[1] == "0,-1.0,0.0"
        assert len(lines) == 5

    def test_write_graph_dot(self, tmp_path, cycle_table):
        path = tmp_path / "graph.dot"
        write_graph_dot(str(path), build_graph(cycle_table))
        text = path.read_text()
        assert text.startswith("digraph G_A {\n")
        assert "  3 -> 5;\n" in text
        assert "  4 -> 4;\n" in text
