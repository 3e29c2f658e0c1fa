import pytest

from src.core.extended import NEG_INF
from src.core.matrix import Matrix
from src.errors import ParseError
from src.reports.matrix_file import (
    dump_matrix,
    parse_matrix_text,
    parse_measure_spec,
    read_matrix_file,
    write_matrix_file,
)


class TestParseMatrix:
    def test_flow_entries(self):
        A = parse_matrix_text("n: 2\nentries: [0, 2.5, 0.5, 0]\n")
        assert A == Matrix.from_rows([[0, 2.5], [0.5, 0]])

    def test_block_entries(self):
        A = parse_matrix_text("n: 2\nentries:\n  - 1\n  - 0\n  - 0\n  - 1\n")
        assert A == Matrix.identity(2)

    def test_bad_entry_reports_line(self):
        with pytest.raises(ParseError) as e:
            parse_matrix_text("n: 2\nentries:\n  - 1\n  - 0\n  - abc\n  - 1\n")
        assert e.value.line == 5
        assert e.value.field == "entries[2]"
        assert "line 5" in str(e.value)

    def test_infinite_entry(self):
        with pytest.raises(ParseError) as e:
            parse_matrix_text("n: 2\nentries: [1, .inf, 0, 1]\n")
        assert e.value.field == "entries[1]"

    def test_wrong_count(self):
        with pytest.raises(ParseError) as e:
            parse_matrix_text("n: 3\nentries: [1, 0, 0, 1]\n")
        assert e.value.field == "entries"
        assert e.value.line == 2

    def test_missing_field(self):
        with pytest.raises(ParseError) as e:
            parse_matrix_text("n: 2\n")
        assert e.value.field == "entries"

    @pytest.mark.parametrize("value", ["1", "two", "2.5", "true"])
    def test_bad_dimension(self, value):
        with pytest.raises(ParseError) as e:
            parse_matrix_text(f"n: {value}\nentries: [1]\n")
        assert e.value.field == "n"
        assert e.value.line == 1

    def test_not_a_mapping(self):
        with pytest.raises(ParseError) as e:
            parse_matrix_text("- 1\n- 2\n")
        assert e.value.line == 1

    def test_malformed_yaml(self):
        with pytest.raises(ParseError) as e:
            parse_matrix_text("n: 2\nentries: [1, 0\n")
        assert e.value.line is not None

    def test_entries_not_a_list(self):
        with pytest.raises(ParseError) as e:
            parse_matrix_text("n: 2\nentries: 4\n")
        assert e.value.field == "entries"


class TestMatrixFiles:
    def test_write_then_read(self, tmp_path, cycle_table):
        path = tmp_path / "table.yaml"
        write_matrix_file(str(path), cycle_table)
        text, A = read_matrix_file(str(path))
        assert A == cycle_table
        assert text == dump_matrix(cycle_table)

    def test_dump_layout(self):
        text = dump_matrix(Matrix.from_rows([[0, 0.5], [2, 0]]))
        assert text.startswith("n: 2\n")
        assert "entries: [0.0, 0.5, 2.0, 0.0]" in text

    def test_missing_file(self, tmp_path):
        with pytest.raises(OSError):
            read_matrix_file(str(tmp_path / "absent.yaml"))


class TestMeasureSpec:
    def test_commas(self):
        assert parse_measure_spec("0,-1,-inf").coords == (0.0, -1.0, NEG_INF)

    def test_whitespace(self):
        assert parse_measure_spec("  -0.5  0 ").coords == (-0.5, 0.0)

    def test_mixed_separators(self):
        assert parse_measure_spec("-2, 0 -inf").coords == (-2.0, 0.0, NEG_INF)

    def test_empty(self):
        with pytest.raises(ParseError) as e:
            parse_measure_spec("  ")
        assert e.value.field == "x0"

    def test_bad_token(self):
        with pytest.raises(ParseError) as e:
            parse_measure_spec("0,abc")
        assert e.value.field == "x0[1]"

    @pytest.mark.parametrize("text", ["0.5,0", "-1,-2", "-inf,-inf"])
    def test_outside_simplex(self, text):
        with pytest.raises(ParseError) as e:
            parse_measure_spec(text)
        assert e.value.field == "x0"
