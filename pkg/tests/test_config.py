"""Tests for the experiment configuration and its JSON loader."""

import json

import pytest

from dirilab.cli.config_manager import ConfigManager
from dirilab.cli.models.config import ExperimentConfig, Tolerances
from dirilab.cli.utils.errors import ConfigurationError
from dirilab.src.config import OUTPUT_DIR_ENV
from dirilab.src.engine.schedule import CantorSchedule, GeneralSchedule


class TestExperimentConfig:
    def test_defaults_validate(self):
        config = ExperimentConfig()
        config.validate()
        schedule = config.build_schedule()
        assert isinstance(schedule, CantorSchedule)
        assert schedule.window_indices == (4, 10)
        assert config.build_psi().family == "power"

    def test_dict_round_trip(self):
        data = ExperimentConfig(depth=4, seed=9).to_dict()
        assert ExperimentConfig.from_dict(json.loads(json.dumps(data))).to_dict() == data

    def test_unknown_keys_are_rejected(self):
        with pytest.raises(ConfigurationError):
            ExperimentConfig.from_dict({"depht": 3})
        with pytest.raises(ConfigurationError):
            ExperimentConfig.from_dict({"tolerances": {"solvr": 1e-9}})

    def test_non_object_is_rejected(self):
        with pytest.raises(ConfigurationError):
            ExperimentConfig.from_dict([1, 2])

    @pytest.mark.parametrize(
        "values",
        [
            {"depth": 0},
            {"precision_bits": 32},
            {"step3": "other"},
            {"schedule": {"kind": "cantor", "M": 1, "L": 2, "window_blocks": [1]}},
            {"schedule": {"kind": "cantor", "M": 3, "L": 2}},
            {"psi": {"family": "power", "tau": "-1"}},
            {"tolerances": {"mass": -1}},
        ],
    )
    def test_invalid_values(self, values):
        with pytest.raises(ConfigurationError):
            ExperimentConfig.from_dict(values).validate()

    def test_overrides(self):
        config = ExperimentConfig().override(M=5, tau=0, depth=3, mass=1e-6, seed=None)
        assert config.schedule["M"] == 5
        assert config.schedule["tau"] == "0"
        assert config.depth == 3
        assert config.tolerances.mass == 1e-6
        assert config.seed == 0

    def test_general_schedule(self):
        config = ExperimentConfig.from_dict(
            {
                "schedule": {
                    "kind": "general",
                    "Q_seq": [2**40],
                    "delta": "3/10",
                    "epsilon": "1/10",
                    "M": 2,
                    "tau": "1",
                }
            }
        )
        assert isinstance(config.build_schedule(), GeneralSchedule)

    def test_environment_wins_for_output(self, monkeypatch, tmp_path):
        monkeypatch.setenv(OUTPUT_DIR_ENV, str(tmp_path))
        assert ExperimentConfig(output_dir="elsewhere").to_lab_config().output_dir == str(tmp_path)


class TestTolerances:
    def test_defaults(self):
        tolerances = Tolerances()
        tolerances.validate()
        assert tolerances.mass == 1e-9
        assert tolerances.consistency == 1e-12

    def test_non_numbers_are_rejected(self):
        with pytest.raises(ConfigurationError):
            Tolerances.from_dict({"mass": "tight"})


class TestConfigManager:
    def test_defaults_without_a_file(self):
        manager = ConfigManager()
        config = manager.load()
        assert config.depth == ExperimentConfig().depth
        assert manager.source is None

    def test_load_and_save(self, tmp_path, write_config):
        path = write_config({"depth": 4})
        manager = ConfigManager()
        assert manager.load(path).depth == 4
        assert manager.source == path

        saved = manager.save(tmp_path / "copy.json")
        assert json.loads(saved.read_text())["depth"] == 4

    def test_malformed_json(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{depth: 4")
        with pytest.raises(ConfigurationError):
            ConfigManager().load(path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigurationError):
            ConfigManager().load(tmp_path / "absent.json")

    def test_environment_overrides_output(self, monkeypatch, tmp_path, write_config):
        monkeypatch.setenv(OUTPUT_DIR_ENV, str(tmp_path / "env"))
        config = ConfigManager().load(write_config({"output_dir": "from-file"}))
        assert config.output_dir == str(tmp_path / "env")
