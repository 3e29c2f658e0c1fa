"""End-to-end runs over matrix files written to disk."""

import json

import pytest

from scripts.write_cycle_table_cases import write_cases
from src.core.builders import CYCLE_TABLE_REGIMES
from src.main import run
from src.reports.matrix_file import read_matrix_file
from src.rules.classifier import ClassII, classify


@pytest.fixture
def regime_files(tmp_path):
    return write_cases(str(tmp_path / "cases"), scale=2.5)


class TestCycleTableCases:
    def test_writes_one_file_per_regime(self, regime_files):
        assert len(regime_files) == len(CYCLE_TABLE_REGIMES)
        assert [p.rsplit("/", 1)[-1] for p in regime_files] == [f"regime_{k}.yaml" for k in range(1, 9)]
        for path in regime_files:
            result = classify(read_matrix_file(path)[1])
            assert isinstance(result, ClassII)
            assert result.permutation.images == (2, 1, 5, 4, 3)

    def test_fixed_point_generators_follow_unit_cycles(self, regime_files, config_file, capsys):
        for path, flags in zip(regime_files, CYCLE_TABLE_REGIMES):
            assert run(["--config", config_file, "--format", "json", "fixed-points", path]) == 0
            record = json.loads(capsys.readouterr().out)
            fixed = record["results"]["fixed_points"]
            assert len(fixed["generators"]) == sum(flags)
            assert fixed["requires_zero_anchor"] == all(flags)

    def test_verify_all_regimes(self, regime_files, config_file, capsys):
        code = run(["--config", config_file, "--format", "json", "verify", *regime_files, "--cases", "5"])
        record = json.loads(capsys.readouterr().out)
        assert code == 0, record["results"]["failures"]
        assert record["results"]["cases"] == 40
        assert set(record["results"]["by_source"]) == set(regime_files)

    def test_pipeline_commands_share_a_file(self, regime_files, config_file, capsys, tmp_path):
        path = regime_files[-1]
        csv_path = tmp_path / "run.csv"
        assert run(["--config", config_file, "--format", "json", "simulate", path, "0,-1,-2,-0.5,-3",
                    "--steps", "40", "--csv", str(csv_path)]) == 0
        simulated = json.loads(capsys.readouterr().out)
        assert simulated["results"]["omega"]["verdict"] == "periodic"
        assert simulated["results"]["omega"]["period"] == 2

        assert run(["--config", config_file, "--format", "json", "predict", path, "0,-1,-2,-0.5,-3"]) == 0
        predicted = json.loads(capsys.readouterr().out)
        assert {c["verdict"] for c in predicted["results"]["limits"]} == {"periodic"}
        assert len(csv_path.read_text().splitlines()) == 42
