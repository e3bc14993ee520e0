"""Structured run reports.

One JSON document per run::

    {"version": ..., "seed": ..., "sections": [
        {"command": ..., "inputs": {...}, "result": {...}, "witnesses": [...]}]}

Every number is stored as a rational string, so reports are bit-exact.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from typing import Any

FALSIFIED_VERDICTS = ("falsified",)


@dataclass
class Section:
    command: str
    inputs: dict[str, Any] = field(default_factory=dict)
    result: dict[str, Any] = field(default_factory=dict)
    witnesses: list[dict[str, Any]] = field(default_factory=list)

    @property
    def falsified(self) -> bool:
        return self.result.get("verdict") in FALSIFIED_VERDICTS or self.result.get("passed") is False


@dataclass
class Report:
    version: str
    seed: int
    sections: list[Section] = field(default_factory=list)

    @property
    def falsified(self) -> bool:
        return any(s.falsified for s in self.sections)

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, ensure_ascii=False) + "\n"

    @classmethod
    def from_json(cls, text: str) -> Report:
        data = json.loads(text)
        return cls(data["version"], data["seed"], [Section(**s) for s in data["sections"]])

    def to_text(self) -> str:
        lines = []
        for s in self.sections:
            lines.append(f"> {s.command}")
            for key, value in s.result.items():
                lines.append(f"  {key}: {_flat(value)}")
            for w in s.witnesses:
                lines.append("  witness: " + ", ".join(f"{k}={_flat(v)}" for k, v in w.items()))
        return "\n".join(lines) + ("\n" if lines else "")


def _flat(value) -> str:
    if isinstance(value, list):
        return "[" + ", ".join(_flat(v) for v in value) + "]"
    if isinstance(value, dict):
        return "{" + ", ".join(f"{k}: {_flat(v)}" for k, v in value.items()) + "}"
    if isinstance(value, bool):
        return "true" if value else "false"
    return str(value)
