"""Sweep grids: determinism, error recording, empty-grid rejection."""

from __future__ import annotations

import pytest

from fusionweights.errors import MalformedSpec
from fusionweights.reports import records_to_tsv
from fusionweights.sweeps import SweepConfig, run_sweep


def test_empty_grid_rejected():
    with pytest.raises(MalformedSpec):
        SweepConfig.from_json({"command": "chars", "grid": {}})
    with pytest.raises(MalformedSpec):
        SweepConfig.from_json({"command": "chars", "grid": {"e": []}})
    with pytest.raises(MalformedSpec):
        SweepConfig.from_json({"command": "nope", "grid": {"e": [1]}})


def test_chars_sweep_cells_pass():
    config = SweepConfig.from_json({
        "command": "chars",
        "grid": {"case": [1, 2], "x1": ["C1", "C2"], "e": [1, 2], "ell": [3]},
    })
    report = run_sweep(config)
    assert report.integers["cells"] == 8
    # C1 has no C2 quotient only through the strict X1 rule? C1 is allowed;
    # every listed cell satisfies the hypotheses here
    assert report.integers["pass"] == 8
    assert report.passed


def test_sweep_records_errors_without_aborting():
    config = SweepConfig.from_json({
        "command": "chars",
        "grid": {"case": [1], "x1": ["S3"], "e": [4, 1], "ell": [5]},
    })
    report = run_sweep(config)
    statuses = [r["status"] for r in report.records]
    assert statuses == ["error", "pass"]      # S3 has no C4 quotient
    assert report.records[0]["error"]["type"] == "NoSuchQuotient"
    assert not report.passed


def test_sweep_deterministic_order_and_parallel_merge():
    doc = {
        "command": "thev",
        "grid": {"group": ["S3", "S5", "Frob(5,4)"], "ell": [3, 5]},
    }
    seq = run_sweep(SweepConfig.from_json(doc))
    par = run_sweep(SweepConfig.from_json(dict(doc, workers=3)))
    assert [r.get("group") for r in seq.records] == [
        "S3", "S3", "S5", "S5", "Frob(5,4)", "Frob(5,4)"]
    assert seq.records == par.records
    # v_ell mismatches are recorded as errors, identities as passes
    by_status = {}
    for r in seq.records:
        by_status.setdefault(r["status"], []).append((r["group"], r["ell"]))
    assert ("S3", 3) in by_status["pass"]
    assert ("S5", 5) in by_status["pass"]
    assert ("S3", 5) in by_status["error"]     # 5 does not divide 6


def test_am_sweep():
    config = SweepConfig.from_json({
        "command": "am", "grid": {"family": ["A"], "ell": [3]},
        "levels": [1, 2, 3, 4],
    })
    report = run_sweep(config)
    assert report.passed
    assert report.integers["pass"] == 1


def test_tsv_rendering():
    config = SweepConfig.from_json({
        "command": "thev", "grid": {"group": ["S3"], "ell": [3]},
    })
    report = run_sweep(config)
    tsv = records_to_tsv(report.records)
    assert tsv.splitlines()[0].startswith("group\tell")
