"""Verification report objects and their stable serializations.

Reports hold exact integers and identity chains with per-link verdicts.
The canonical JSON form excludes wall-clock timings so that reports are
byte-stable across runs with identical inputs and engine version; live API
responses may carry the timing separately.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from . import ENGINE_VERSION


@dataclass(frozen=True)
class ChainLink:
    label: str
    left: int
    right: int

    @property
    def ok(self) -> bool:
        return self.left == self.right

    def to_dict(self) -> dict:
        return {"label": self.label, "left": self.left, "right": self.right,
                "ok": self.ok}


@dataclass(frozen=True)
class Chain:
    name: str
    links: tuple

    @property
    def ok(self) -> bool:
        return all(link.ok for link in self.links)

    def to_dict(self) -> dict:
        return {"name": self.name, "ok": self.ok,
                "links": [l.to_dict() for l in self.links]}


@dataclass
class VerificationReport:
    command: str
    inputs: dict
    integers: dict = field(default_factory=dict)
    chains: list = field(default_factory=list)
    flags: list = field(default_factory=list)
    records: list = field(default_factory=list)   # per-cell / per-level rows
    passed: bool = True
    duration_ms: float | None = None
    engine_version: str = ENGINE_VERSION

    def add_chain(self, name: str, links: list[tuple[str, int, int]]) -> Chain:
        chain = Chain(name=name, links=tuple(ChainLink(*l) for l in links))
        self.chains.append(chain)
        if not chain.ok:
            self.passed = False
        return chain

    def set_integer(self, key: str, value: int) -> None:
        self.integers[key] = int(value)

    def to_dict(self, include_timings: bool = False) -> dict:
        doc = {
            "command": self.command,
            "engine_version": self.engine_version,
            "inputs": self.inputs,
            "integers": dict(sorted(self.integers.items())),
            "chains": [c.to_dict() for c in self.chains],
            "flags": list(self.flags),
            "records": list(self.records),
            "passed": self.passed,
        }
        if include_timings and self.duration_ms is not None:
            doc["duration_ms"] = round(self.duration_ms, 3)
        return doc

    def canonical_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))

    def pretty_json(self, include_timings: bool = False) -> str:
        return json.dumps(self.to_dict(include_timings), indent=2, sort_keys=True)


def records_to_tsv(records: list[dict]) -> str:
    """Aligned TSV with a deterministic column order."""
    if not records:
        return ""
    columns: list[str] = []
    for rec in records:
        for key in rec:
            if key not in columns:
                columns.append(key)
    lines = ["\t".join(columns)]
    for rec in records:
        lines.append("\t".join(_cell(rec.get(c)) for c in columns))
    return "\n".join(lines) + "\n"


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "pass" if value else "fail"
    if isinstance(value, dict):
        return ",".join(f"{k}={_cell(v)}" for k, v in sorted(value.items()))
    if isinstance(value, (list, tuple)):
        return ",".join(str(v) for v in value)
    return str(value)
