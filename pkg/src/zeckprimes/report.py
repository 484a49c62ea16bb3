"""Experiment reports and their CSV / JSON encodings."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import Any

from . import __version__


def _plain(value: Any) -> Any:
    """Turn numpy scalars and complex numbers into JSON-friendly values."""
    if isinstance(value, complex):
        return {"re": value.real, "im": value.imag}
    if hasattr(value, "item") and not isinstance(value, (list, dict)):
        return _plain(value.item())
    if isinstance(value, float) and not math.isfinite(value):
        return str(value)
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    return value


@dataclass
class ExperimentReport:
    experiment: str
    params: dict[str, Any]
    seed: int | None = None
    rows: list[dict[str, Any]] = field(default_factory=list)
    summary: dict[str, Any] = field(default_factory=dict)
    wall_clock: float | None = None

    def to_dict(self, timing: bool = True) -> dict[str, Any]:
        out = {
            "experiment": self.experiment,
            "params": _plain(self.params),
            "seed": self.seed,
            "rows": _plain(self.rows),
            "summary": _plain(self.summary),
            "version": __version__,
        }
        if timing and self.wall_clock is not None:
            out["wall_clock"] = self.wall_clock
        return out

    def to_json(self, timing: bool = True) -> str:
        return json.dumps(self.to_dict(timing), indent=2, sort_keys=False)

    def to_csv(self, timing: bool = True) -> str:
        """``#`` metadata lines, then a header line and one line per row."""
        buf = io.StringIO()
        buf.write(f"# experiment: {self.experiment}\n")
        buf.write(f"# version: {__version__}\n")
        buf.write(f"# seed: {self.seed}\n")
        buf.write(f"# params: {json.dumps(_plain(self.params), sort_keys=True)}\n")
        buf.write(f"# summary: {json.dumps(_plain(self.summary), sort_keys=True)}\n")
        if timing and self.wall_clock is not None:
            buf.write(f"# wall_clock: {self.wall_clock:.3f}\n")
        columns: list[str] = []
        for row in self.rows:
            columns.extend(c for c in row if c not in columns)
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(columns)
        for row in self.rows:
            writer.writerow([_csv_cell(row.get(c, "")) for c in columns])
        return buf.getvalue()

    def render(self, fmt: str, timing: bool = True) -> str:
        if fmt == "json":
            return self.to_json(timing) + "\n"
        if fmt == "csv":
            return self.to_csv(timing)
        raise ValueError(f"unknown format {fmt!r}")


def _csv_cell(value: Any) -> Any:
    value = _plain(value)
    if isinstance(value, dict):
        return json.dumps(value, sort_keys=True)
    if isinstance(value, float):
        return repr(value)
    return value


def parse_csv(text: str) -> tuple[dict[str, str], list[dict[str, str]]]:
    """Split a CSV report back into its metadata and rows."""
    meta: dict[str, str] = {}
    lines = text.splitlines()
    body_start = 0
    for i, line in enumerate(lines):
        if not line.startswith("#"):
            body_start = i
            break
        key, _, value = line[1:].strip().partition(": ")
        meta[key] = value
    else:
        body_start = len(lines)
    rows = list(csv.DictReader(lines[body_start:]))
    return meta, rows
