"""Shared fixtures for the dirilab test suite."""

import json

import pytest
from click.testing import CliRunner

from dirilab.src.config import OUTPUT_DIR_ENV
from dirilab.src.engine.cantor import make_schedule


@pytest.fixture(autouse=True)
def _clean_output_env(monkeypatch):
    monkeypatch.delenv(OUTPUT_DIR_ENV, raising=False)


@pytest.fixture
def small_schedule():
    """M = 2, L = 2, one window at n_1 = 4."""
    return make_schedule(2, 2, [1])


@pytest.fixture
def audit_schedule():
    """M = 3, L = 2, windows at n = 4 and n = 10."""
    return make_schedule(3, 2, [1, 2])


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def write_config(tmp_path):
    """Write a JSON experiment configuration and return its path."""

    def _write(data, name="experiment.json"):
        path = tmp_path / name
        path.write_text(json.dumps(data))
        return path

    return _write
