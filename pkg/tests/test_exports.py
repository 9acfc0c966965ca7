"""Tests for the deterministic text renderers."""

import json
from fractions import Fraction

from dirilab.src.engine.cantor import enumerate_level
from dirilab.src.engine.models import Finding
from dirilab.src.exports import LEVEL_COLUMNS, PRESSURE_COLUMNS, exporter, level_rows


class TestCsv:
    def test_fixed_column_order(self):
        text = exporter.render_csv(PRESSURE_COLUMNS, [{"S": "0.5", "M": 2, "L": 2}])
        header, row = text.splitlines()
        assert header == "L,M,tau,S,residual,evaluations,distance"
        assert row == "2,2,,0.5,,,"
        assert text.endswith("\n") and "\r" not in text

    def test_level_rows(self, small_schedule):
        rows = level_rows(enumerate_level(small_schedule, 1, budget=10))
        assert [row["word"] for row in rows] == ["[2]", "[1]"]
        assert rows[0]["length"] == Fraction(3, 7) - Fraction(1, 3)
        text = exporter.render_csv(LEVEL_COLUMNS, rows)
        assert text.splitlines()[1] == "1,0,[2],I,1/3,3/7,2/21,1/6"


class TestJson:
    def test_sorted_keys_and_models(self):
        finding = Finding(check="gap-I", subject="[1]", observed="1/20", bound="1/16")
        text = exporter.render_json({"b": 1, "a": [finding], "c": 3})
        assert text.endswith("}\n")
        data = json.loads(text)
        assert list(data) == ["a", "b", "c"]
        assert data["a"][0]["check"] == "gap-I"

    def test_jsonl(self):
        records = [
            Finding(check="x", subject="s", observed="o", bound="b"),
            Finding(check="y", subject="s", observed="o", bound="b", detail="d"),
        ]
        lines = exporter.render_jsonl(records).splitlines()
        assert [json.loads(line)["check"] for line in lines] == ["x", "y"]
        assert exporter.render_jsonl([]) == ""

    def test_plot_data(self):
        text = exporter.render_plot_data([(0.5, 1.0), (1.0, 2.0)], header="log r  log mu")
        assert text == "# log r  log mu\n0.5 1\n1 2\n"
