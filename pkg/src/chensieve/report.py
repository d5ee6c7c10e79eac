"""Flat report rows written as CSV or JSON.

Both formats carry the same metadata block (tool version, config echo,
seed, per-field tolerance) and the same fixed column order, so a report
regenerated from the same config is byte-identical.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from . import __version__


def _cell(v: Any) -> Any:
    if isinstance(v, Fraction):
        return f"{v.numerator}/{v.denominator}"
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return v


@dataclass
class Report:
    command: str
    config: dict[str, Any]
    columns: list[str]
    rows: list[dict[str, Any]] = field(default_factory=list)
    tolerances: dict[str, str] = field(default_factory=dict)
    failures: list[str] = field(default_factory=list)

    def add(self, **row: Any) -> None:
        missing = [c for c in self.columns if c not in row]
        if missing:
            raise KeyError(f"row lacks columns {missing}")
        self.rows.append(row)

    def fail(self, name: str) -> None:
        self.failures.append(name)

    @property
    def ok(self) -> bool:
        return not self.failures

    def meta(self) -> dict[str, Any]:
        return {
            "tool": "chensieve",
            "version": __version__,
            "command": self.command,
            "config": {k: _cell(v) for k, v in sorted(self.config.items())},
            "seed": self.config.get("seed"),
            "tolerances": dict(sorted(self.tolerances.items())),
            "status": "PASS" if self.ok else "FAIL",
            "failures": list(self.failures),
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        meta = self.meta()
        for key in ("tool", "version", "command", "seed", "status"):
            buf.write(f"# {key}={meta[key]}\n")
        buf.write("# config=" + json.dumps(meta["config"], sort_keys=True) + "\n")
        buf.write("# tolerances=" + json.dumps(meta["tolerances"], sort_keys=True) + "\n")
        if self.failures:
            buf.write("# failures=" + ";".join(self.failures) + "\n")
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.columns)
        for row in self.rows:
            writer.writerow([_cell(row[c]) for c in self.columns])
        return buf.getvalue()

    def to_json(self) -> str:
        payload = {
            "meta": self.meta(),
            "columns": self.columns,
            "rows": [{c: _cell(r[c]) for c in self.columns} for r in self.rows],
        }
        return json.dumps(payload, indent=2) + "\n"

    def render(self, fmt: str) -> str:
        return self.to_json() if fmt == "json" else self.to_csv()


def read_csv(text: str) -> tuple[dict[str, str], list[dict[str, str]]]:
    """Parse a CSV report back into (metadata, rows); metadata values are raw strings."""
    meta, body = {}, []
    for line in text.splitlines():
        if line.startswith("# "):
            key, _, value = line[2:].partition("=")
            meta[key] = value
        else:
            body.append(line)
    rows = list(csv.DictReader(body))
    return meta, rows
