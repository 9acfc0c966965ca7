"""
Rendering of lab results into deterministic text: CSV tables, sorted-key JSON,
JSON-lines findings and two-column plot data.

Renderers return strings; writing them to disk is the caller's job.
"""

import csv
import io
import json
from typing import Any, Dict, Iterable, List, Mapping, Sequence, Tuple

from pydantic import BaseModel

LEVEL_COLUMNS = ("level", "index", "word", "case", "left", "right", "length", "cylinder_length")
PRESSURE_COLUMNS = ("L", "M", "tau", "S", "residual", "evaluations", "distance")
MEASURE_COLUMNS = ("level", "word", "left", "right", "mass", "role")
DIMENSION_COLUMNS = ("level", "count", "mean_length", "mass_min", "mass_max", "mass_mean")


class LabExporter:
    """Stateless text renderers shared by the CLI commands."""

    @staticmethod
    def to_jsonable(data: Any) -> Any:
        if isinstance(data, BaseModel):
            return data.model_dump(mode="json")
        if isinstance(data, Mapping):
            return {str(k): LabExporter.to_jsonable(v) for k, v in data.items()}
        if isinstance(data, (list, tuple)):
            return [LabExporter.to_jsonable(v) for v in data]
        return data

    @staticmethod
    def render_csv(columns: Sequence[str], rows: Iterable[Mapping[str, Any]]) -> str:
        """CSV with a header and a fixed column order; missing cells are empty."""
        buffer = io.StringIO()
        writer = csv.DictWriter(
            buffer, fieldnames=list(columns), extrasaction="ignore", lineterminator="\n"
        )
        writer.writeheader()
        for row in rows:
            writer.writerow({k: "" if row.get(k) is None else str(row.get(k)) for k in columns})
        return buffer.getvalue()

    @staticmethod
    def render_json(data: Any) -> str:
        return json.dumps(LabExporter.to_jsonable(data), indent=2, sort_keys=True) + "\n"

    @staticmethod
    def render_jsonl(records: Iterable[Any]) -> str:
        lines = [json.dumps(LabExporter.to_jsonable(r), sort_keys=True) for r in records]
        return "".join(line + "\n" for line in lines)

    @staticmethod
    def render_plot_data(points: Sequence[Tuple[float, float]], header: str = "") -> str:
        """Whitespace separated x y pairs, one per line, with an optional # header."""
        out = [f"# {header}"] if header else []
        out.extend(f"{x:.12g} {y:.12g}" for x, y in points)
        return "\n".join(out) + "\n"


def level_rows(level_set: Any) -> List[Dict[str, Any]]:
    """Rows of LEVEL_COLUMNS for a materialized LevelSet."""
    rows = []
    for index, entry in enumerate(level_set.entries):
        rows.append(
            {
                "level": level_set.n,
                "index": index,
                "word": str(entry.word),
                "case": entry.case_tag,
                "left": entry.interval.left,
                "right": entry.interval.right,
                "length": entry.interval.length,
                "cylinder_length": entry.cylinder.length,
            }
        )
    return rows


exporter = LabExporter()
