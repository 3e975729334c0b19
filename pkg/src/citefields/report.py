"""Tabular analysis results with provenance metadata and CSV/JSON writers.

Every analysis in the package returns (or can be wrapped into) a
``MetricReport``: named columns, rows of plain values, and a metadata
mapping recording the configuration the numbers were produced under.
Output is deterministic: no timestamps, floats via ``repr`` so values
round-trip at full precision.
"""

from __future__ import annotations

import io
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, IO


def format_cell(value: Any) -> str:
    """Render one cell for CSV output; None becomes an empty cell."""
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


@dataclass
class MetricReport:
    name: str
    columns: tuple[str, ...]
    rows: list[tuple] = field(default_factory=list)
    metadata: dict[str, Any] = field(default_factory=dict)

    def add_row(self, *values) -> None:
        if len(values) != len(self.columns):
            raise ValueError(
                f"row width {len(values)} != {len(self.columns)} columns"
            )
        self.rows.append(tuple(values))

    def to_csv_text(self) -> str:
        """CSV with a mandatory header row; metadata as leading '#' comment lines.

        Comment lines are `# key: value`, sorted by key, so output is
        byte-stable for identical inputs.
        """
        out = io.StringIO()
        for key in sorted(self.metadata):
            value = self.metadata[key]
            out.write(f"# {key}: {'' if value is None else value}\n")
        out.write(",".join(self.columns) + "\n")
        for row in self.rows:
            out.write(",".join(format_cell(v) for v in row) + "\n")
        return out.getvalue()

    def to_json_text(self) -> str:
        payload = {
            "report": self.name,
            "metadata": {k: self.metadata[k] for k in sorted(self.metadata)},
            "columns": list(self.columns),
            "rows": [list(row) for row in self.rows],
        }
        return json.dumps(payload, indent=2, sort_keys=False) + "\n"

    def write(self, target: str | Path | IO[str], fmt: str = "csv") -> None:
        text = self.to_csv_text() if fmt == "csv" else self.to_json_text()
        if hasattr(target, "write"):
            target.write(text)
        else:
            Path(target).write_text(text, encoding="utf-8")

    def column(self, name: str) -> list:
        idx = self.columns.index(name)
        return [row[idx] for row in self.rows]


def base_metadata(report_name: str, **extra: Any) -> dict[str, Any]:
    """Common provenance keys every report carries."""
    from . import __version__

    meta: dict[str, Any] = {"tool": "citefields", "version": __version__, "report": report_name}
    meta.update(extra)
    return meta


def window_label(window) -> str:
    return f"{window.start}:{window.end}" if window is not None else "all"
