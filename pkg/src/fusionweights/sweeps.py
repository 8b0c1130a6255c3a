"""Parameter-grid sweeps over the verifiers.

A SweepConfig names a command and lists parameter values; the cartesian
grid is executed cell by cell (optionally on a thread pool), each cell
yields one record, per-cell errors are recorded without aborting, and the
merged output is deterministic regardless of worker count.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import product

from .charcounts import verify_thev
from .errors import EngineError, MalformedSpec
from .families import family_A_spec, family_B_spec, verify_awc, verify_chars
from .grammar import parse_group_spec
from .groupspec import build_group
from .reports import VerificationReport

_COMMANDS = ("chars", "thev", "awc", "am", "connectivity")


@dataclass(frozen=True)
class SweepConfig:
    command: str
    grid: dict                      # parameter name -> list of values
    levels: tuple = ()              # for am / connectivity
    workers: int = 0
    budget: int = 0

    @staticmethod
    def from_json(doc: dict) -> "SweepConfig":
        command = doc.get("command", "")
        if command not in _COMMANDS:
            raise MalformedSpec(f"sweep command must be one of {_COMMANDS}")
        grid = doc.get("grid", {})
        if not isinstance(grid, dict) or not grid:
            raise MalformedSpec("sweep grid must be a non-empty object")
        for key, values in grid.items():
            if not isinstance(values, list) or not values:
                raise MalformedSpec(f"grid axis {key!r} must be a non-empty list")
        levels = tuple(int(x) for x in doc.get("levels", []))
        workers = int(doc.get("workers", 0))
        budget = int(doc.get("budget", 0))
        if budget < 0:
            raise MalformedSpec("budget must be positive")
        return SweepConfig(command=command, grid=dict(grid), levels=levels,
                           workers=workers, budget=budget)


def _expand(grid: dict) -> list[dict]:
    keys = list(grid.keys())
    cells = []
    for combo in product(*(grid[k] for k in keys)):
        cells.append(dict(zip(keys, combo)))
    return cells


def _resolve_family(cell: dict):
    preset = cell.get("preset")
    if preset:
        return family_B_spec(preset=preset)
    return family_A_spec(int(cell["ell"]))


def _run_cell(command: str, cell: dict, levels: tuple) -> dict:
    record = dict(cell)
    try:
        if command == "chars":
            rep = verify_chars(
                int(cell["case"]), parse_group_spec(str(cell["x1"])),
                int(cell["e"]), int(cell["ell"]),
            )
        elif command == "thev":
            rep = verify_thev(build_group(parse_group_spec(str(cell["group"]))),
                              int(cell["ell"]))
        elif command == "awc":
            rep = verify_awc(_resolve_family(cell))
        elif command == "am":
            from .tower import verify_am
            rep = verify_am(_resolve_family(cell), list(levels or (1,)))
        elif command == "connectivity":
            from .tower import connectivity_check
            rep = connectivity_check(_resolve_family(cell),
                                     int(cell.get("level", levels[0] if levels else 1)))
        else:  # pragma: no cover - guarded by SweepConfig
            raise MalformedSpec(f"unknown sweep command {command!r}")
        record["status"] = "pass" if rep.passed else "fail"
        record["integers"] = dict(sorted(rep.integers.items()))
    except EngineError as exc:
        record["status"] = "error"
        record["error"] = exc.record()
    return record


def run_sweep(config: SweepConfig) -> VerificationReport:
    cells = _expand(config.grid)
    report = VerificationReport(
        command=f"sweep-{config.command}",
        inputs={"grid": {k: list(v) for k, v in config.grid.items()},
                "levels": list(config.levels), "cells": len(cells)},
    )
    if config.workers > 1 and len(cells) > 1:
        with ThreadPoolExecutor(max_workers=config.workers) as pool:
            records = list(pool.map(
                lambda c: _run_cell(config.command, c, config.levels), cells
            ))
    else:
        records = [_run_cell(config.command, c, config.levels) for c in cells]
    report.records = records
    passes = sum(1 for r in records if r["status"] == "pass")
    fails = sum(1 for r in records if r["status"] == "fail")
    errors = sum(1 for r in records if r["status"] == "error")
    report.set_integer("cells", len(records))
    report.set_integer("pass", passes)
    report.set_integer("fail", fails)
    report.set_integer("error", errors)
    report.passed = fails == 0 and errors == 0
    return report
