"""End-to-end tests of the dirilab command line."""

import json

from dirilab import __version__
from dirilab.cli.main import cli
from dirilab.src.config import OUTPUT_DIR_ENV

FAST_EXPERIMENT = {
    "schedule": {"kind": "cantor", "M": 3, "L": 2, "tau": "1", "window_blocks": [1, 2]},
    "depth": 5,
    "samples": 40,
}


def read_csv_column(path, column):
    header, *rows = path.read_text().splitlines()
    index = header.split(",").index(column)
    return [row.split(",")[index] for row in rows]


class TestVersion:
    def test_version_command(self, runner):
        result = runner.invoke(cli, ["version"])
        assert result.exit_code == 0
        assert f"dirilab v{__version__}" in result.output


class TestCf:
    def test_expansion_and_dirichlet(self, runner):
        result = runner.invoke(cli, ["cf", "5/8", "--dirichlet-t", "4"])
        assert result.exit_code == 0
        assert "expansion: [1,1,1,2]" in result.output
        assert "cassels residual 0/1" in result.output
        assert "dirichlet t=4: p=2 q=3" in result.output

    def test_csv(self, runner):
        result = runner.invoke(cli, ["cf", "5/8", "--csv"])
        assert result.exit_code == 0
        lines = result.stdout.splitlines()
        assert lines[0] == "n,a,p,q,cassels_residual"
        assert lines[-1] == "4,2,5,8,"

    def test_value_outside_unit_interval(self, runner):
        result = runner.invoke(cli, ["cf", "8/5"])
        assert result.exit_code == 2

    def test_malformed_value(self, runner):
        assert runner.invoke(cli, ["cf", "five/8"]).exit_code == 2


class TestPressure:
    def test_single_root(self, runner, tmp_path):
        result = runner.invoke(
            cli, ["pressure", "--L", "2", "--M", "2", "--tau", "0", "-o", str(tmp_path)]
        )
        assert result.exit_code == 0
        (S,) = read_csv_column(tmp_path / "pressure.csv", "S")
        assert 0.65 < float(S) < 0.66

    def test_sweep_is_increasing(self, runner, tmp_path):
        result = runner.invoke(
            cli, ["pressure", "--L", "2", "--M", "2..6", "--tau", "1", "-o", str(tmp_path)]
        )
        assert result.exit_code == 0
        values = [float(v) for v in read_csv_column(tmp_path / "pressure.csv", "S")]
        assert len(values) == 5
        assert all(b > a for a, b in zip(values, values[1:]))

    def test_block_length_one_is_rejected(self, runner, tmp_path):
        result = runner.invoke(cli, ["pressure", "--L", "1", "--M", "3", "-o", str(tmp_path)])
        assert result.exit_code == 2

    def test_budget_keeps_partial_output(self, runner, tmp_path):
        result = runner.invoke(
            cli,
            ["pressure", "--L", "2", "--M", "2,50", "--term-budget", "100", "-o", str(tmp_path)],
        )
        assert result.exit_code == 1
        assert read_csv_column(tmp_path / "pressure.csv", "M") == ["2"]


class TestCantor:
    def test_outputs_are_reproducible(self, runner, tmp_path, write_config):
        config = write_config(FAST_EXPERIMENT)
        for name in ("first", "second"):
            result = runner.invoke(
                cli, ["cantor", "-c", str(config), "-o", str(tmp_path / name)]
            )
            assert result.exit_code == 0
        for filename in ("levels.csv", "summary.json"):
            first = (tmp_path / "first" / filename).read_bytes()
            assert first == (tmp_path / "second" / filename).read_bytes()

    def test_summary(self, runner, tmp_path):
        result = runner.invoke(
            cli,
            ["cantor", "--M", "2", "--L", "2", "--blocks", "1", "--depth", "4",
             "-o", str(tmp_path)],
        )
        assert result.exit_code == 0
        summary = json.loads((tmp_path / "summary.json").read_text())
        assert summary["schedule"]["window_indices"] == [4]
        assert [level["count"] for level in summary["levels"]] == [2, 4, 4, 15]

    def test_budget_truncation_exits_one(self, runner, tmp_path):
        result = runner.invoke(
            cli, ["cantor", "--depth", "4", "--budget", "5", "-o", str(tmp_path)]
        )
        assert result.exit_code == 1
        assert (tmp_path / "levels.csv").exists()

    def test_invalid_schedule_in_config(self, runner, tmp_path, write_config):
        config = write_config({"schedule": {"kind": "cantor", "M": 1, "L": 2,
                                            "window_blocks": [1]}})
        result = runner.invoke(cli, ["cantor", "-c", str(config), "-o", str(tmp_path)])
        assert result.exit_code == 2
        assert not (tmp_path / "levels.csv").exists()

    def test_environment_output_directory(self, runner, tmp_path, monkeypatch):
        monkeypatch.setenv(OUTPUT_DIR_ENV, str(tmp_path / "env"))
        result = runner.invoke(cli, ["cantor", "--depth", "2", "-o", str(tmp_path / "flag")])
        assert result.exit_code == 0
        assert (tmp_path / "env" / "levels.csv").exists()
        assert not (tmp_path / "flag").exists()


class TestMeasure:
    def test_normalized_levels(self, runner, tmp_path, write_config):
        result = runner.invoke(
            cli, ["measure", "-c", str(write_config(FAST_EXPERIMENT)), "-o", str(tmp_path)]
        )
        assert result.exit_code == 0
        assert (tmp_path / "findings.jsonl").read_text() == ""
        assert (tmp_path / "measure.csv").read_text().startswith("level,word,left,right")

    def test_quarter_power_divisor_reports_findings(self, runner, tmp_path, write_config):
        result = runner.invoke(
            cli,
            ["measure", "-c", str(write_config(FAST_EXPERIMENT)), "--step3", "quarter-power",
             "-o", str(tmp_path)],
        )
        assert result.exit_code == 1
        assert (tmp_path / "findings.jsonl").read_text() != ""

    def test_stem_restricts_the_tree(self, runner, tmp_path, write_config):
        result = runner.invoke(
            cli,
            ["measure", "-c", str(write_config(FAST_EXPERIMENT)), "--stem", "1,1,4,3",
             "-o", str(tmp_path)],
        )
        assert result.exit_code == 0
        assert (tmp_path / "findings.jsonl").read_text() == ""
        words = read_csv_column(tmp_path / "measure.csv", "word")
        assert all(word.startswith("1 1 4 3") for word in words if len(word.split()) >= 4)
        assert "level   3" not in result.output

    def test_inadmissible_stem(self, runner, tmp_path, write_config):
        result = runner.invoke(
            cli,
            ["measure", "-c", str(write_config(FAST_EXPERIMENT)), "--stem", "1,1,3",
             "-o", str(tmp_path)],
        )
        assert result.exit_code == 2


class TestDimension:
    def test_estimates(self, runner, tmp_path, write_config):
        config = write_config({**FAST_EXPERIMENT, "depth": 6})
        result = runner.invoke(cli, ["dimension", "-c", str(config), "-o", str(tmp_path)])
        assert result.exit_code == 0
        assert "formula 0.6667" in result.output
        for filename in ("dimension.csv", "box-count.dat", "mdp-fit.dat", "summary.json"):
            assert (tmp_path / filename).exists()
        summary = json.loads((tmp_path / "summary.json").read_text())
        assert summary["cross_validation"]["formula"] == 2 / 3

    def test_lebesgue_control(self, runner, tmp_path):
        result = runner.invoke(
            cli, ["dimension", "--control", "--depth", "12", "-o", str(tmp_path)]
        )
        assert result.exit_code == 0
        summary = json.loads((tmp_path / "summary.json").read_text())
        assert summary["cross_validation"]["within_tolerance"] == {
            "box-count": True,
            "mdp-fit": True,
        }

    def test_general_schedule_is_rejected(self, runner, tmp_path, write_config):
        config = write_config(
            {
                "schedule": {
                    "kind": "general",
                    "Q_seq": [2**40],
                    "delta": "3/10",
                    "epsilon": "1/10",
                    "M": 2,
                }
            }
        )
        result = runner.invoke(cli, ["dimension", "-c", str(config), "-o", str(tmp_path)])
        assert result.exit_code == 2


class TestAudit:
    def test_clean_audit(self, runner, tmp_path, write_config):
        result = runner.invoke(
            cli, ["audit", "-c", str(write_config(FAST_EXPERIMENT)), "-o", str(tmp_path)]
        )
        assert result.exit_code == 0
        assert (tmp_path / "findings.jsonl").read_text() == ""
        summary = json.loads((tmp_path / "summary.json").read_text())
        assert summary["finding_count"] == 0

    def test_injected_fault(self, runner, tmp_path, write_config):
        result = runner.invoke(
            cli,
            ["audit", "-c", str(write_config(FAST_EXPERIMENT)), "--inject-fault", "gap-bound",
             "-o", str(tmp_path)],
        )
        assert result.exit_code == 1
        lines = (tmp_path / "findings.jsonl").read_text().splitlines()
        assert len(lines) == 1
        assert json.loads(lines[0])["check"] == "gap-I"

    def test_inadmissible_configuration(self, runner, tmp_path, write_config):
        config = write_config({"schedule": {"kind": "cantor", "M": 1, "L": 2,
                                            "window_blocks": [1]}})
        result = runner.invoke(cli, ["audit", "-c", str(config), "-o", str(tmp_path)])
        assert result.exit_code == 2

    def test_malformed_configuration(self, runner, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{not json")
        result = runner.invoke(cli, ["audit", "-c", str(path), "-o", str(tmp_path)])
        assert result.exit_code == 2


class TestClassify:
    def test_power_function(self, runner):
        result = runner.invoke(cli, ["classify", "--tau", "1", "--word", "1,1,4,4"])
        assert result.exit_code == 0
        data = json.loads(result.stdout)
        assert data["dimension_formula"] == "2/3"
        assert data["tau"] == "1/1"
        assert data["series"]["verdict"] == "diverges"
        assert data["evidence"]["g_witnesses"] == [2, 3]

    def test_sqrt_needs_depth(self, runner):
        result = runner.invoke(cli, ["classify", "--tau", "1", "--sqrt", "7"])
        assert result.exit_code == 2

    def test_word_and_sqrt_are_exclusive(self, runner):
        result = runner.invoke(
            cli, ["classify", "--tau", "1", "--word", "1,2", "--sqrt", "7", "--depth", "5"]
        )
        assert result.exit_code == 2
