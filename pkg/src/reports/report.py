"""The structured record every subcommand returns, and its two renderings."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field

import yaml

from src import __version__


@dataclass
class Report:
    command: str
    input_digest: str
    classification: dict | None = None
    results: dict = field(default_factory=dict)
    warnings: list[str] = field(default_factory=list)
    timing: dict | None = None
    exit_code: int = 0

    def to_record(self) -> dict:
        return {
            "version": __version__,
            "command": self.command,
            "input_digest": self.input_digest,
            "classification": self.classification,
            "results": self.results,
            "warnings": self.warnings,
            "timing": self.timing,
        }

    def warn(self, message: str) -> None:
        if message not in self.warnings:
            self.warnings.append(message)


def input_digest(*parts) -> str:
    """sha256 over the command inputs (file bytes and option values)."""
    digest = hashlib.sha256()
    for part in parts:
        if isinstance(part, str):
            part = part.encode("utf-8")
        elif not isinstance(part, bytes):
            part = repr(part).encode("utf-8")
        digest.update(len(part).to_bytes(8, "big"))
        digest.update(part)
    return digest.hexdigest()


def render_json(report: Report) -> str:
    return json.dumps(report.to_record(), sort_keys=True, indent=2, allow_nan=False) + "\n"


def render_text(report: Report) -> str:
    record = report.to_record()
    header = f"idemdyn {record.pop('version')} :: {record.pop('command')}\n"
    return header + yaml.safe_dump(record, sort_keys=False, default_flow_style=None, allow_unicode=True)
