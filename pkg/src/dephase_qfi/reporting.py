"""Deterministic file output: sweep tables, JSON reports and run manifests.

CSV numbers are written with 17 significant digits and a dot decimal
separator; JSON is emitted with sorted keys and fixed separators, so reruns
with identical inputs produce byte-identical files.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path


def format_number(x: float) -> str:
    """Up to 17 significant digits, locale independent."""
    return format(float(x), ".17g")


@dataclass
class SweepTable:
    """Ordered (parameter point -> result) rows for CSV emission."""

    columns: list[str]
    rows: list[tuple] = field(default_factory=list)

    def append(self, row):
        if len(row) != len(self.columns):
            raise ValueError("row width does not match the column count")
        self.rows.append(tuple(row))

    def to_csv_text(self) -> str:
        lines = [",".join(self.columns)]
        for row in self.rows:
            lines.append(",".join(format_number(v) for v in row))
        return "\n".join(lines) + "\n"

    def write_csv(self, path):
        Path(path).write_text(self.to_csv_text(), encoding="ascii", newline="\n")


def json_text(payload) -> str:
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def write_json(path, payload):
    Path(path).write_text(json_text(payload), encoding="ascii", newline="\n")


@dataclass
class RunManifest:
    """Record of one CLI invocation, written beside the command's output.

    Duration is rounded to whole seconds so that identical runs of the fast
    data commands produce identical manifests.
    """

    command: str
    argv: list[str]
    parameters: dict
    version: str
    duration_seconds: int
    checks: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "command": self.command,
            "argv": list(self.argv),
            "parameters": dict(self.parameters),
            "version": self.version,
            "duration_seconds": self.duration_seconds,
            "checks": list(self.checks),
        }

    def write(self, path):
        write_json(path, self.to_dict())


def manifest_path_for(output_path, command: str) -> Path:
    if output_path is None:
        return Path(f"{command}.manifest.json")
    return Path(f"{output_path}.manifest.json")


def parse_config_file(path) -> dict[str, str]:
    """key=value pairs, one per line; '#' starts a comment; keys may use
    dashes or underscores."""
    values: dict[str, str] = {}
    text = Path(path).read_text(encoding="utf-8")
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected key=value, got {raw!r}")
        key, value = line.split("=", 1)
        key = key.strip().replace("-", "_")
        if not key:
            raise ValueError(f"{path}:{lineno}: empty key")
        values[key] = value.strip()
    return values
