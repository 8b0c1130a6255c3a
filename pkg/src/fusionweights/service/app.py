"""FastAPI service exposing every verifier over HTTP.

The endpoints wrap the core package one-to-one; the CLI is a thin client
of this app (in-process by default, remote with --server).
"""

from __future__ import annotations

import time

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import ENGINE_VERSION
from ..chartable import character_table
from ..charcounts import little_groups_count, verify_thev
from ..errors import EngineError, MalformedSpec
from ..families import (
    check_or1_hypotheses,
    family_A_spec,
    family_B_spec,
    family_spec_from_json,
    verify_awc,
    verify_chars,
)
from ..grammar import parse_group_spec
from ..groupops import find_normal_subgroup_like
from ..groupspec import build_group
from ..reports import VerificationReport
from ..sweeps import SweepConfig, run_sweep
from .models import (
    AmRequest,
    AwcRequest,
    ChartabRequest,
    CharsRequest,
    ConnectivityRequest,
    HealthResponse,
    LittleRequest,
    MuRequest,
    ReportResponse,
    SweepRequest,
    TableResponse,
    ThevRequest,
)

app = FastAPI(
    title="fusionweights",
    description="Exact verification of weight-count and character-count identities",
    version=ENGINE_VERSION,
)


@app.exception_handler(EngineError)
async def engine_error_handler(request: Request, exc: EngineError):
    return JSONResponse(status_code=422, content={"error": exc.record()})


def _resolver(files: dict):
    def resolve(path: str) -> dict:
        key = "@" + path
        if key in files:
            return files[key]
        if path in files:
            return files[path]
        raise MalformedSpec(f"unresolved file atom @{path}; pass it in 'files'")
    return resolve


def _family_from_request(req) -> object:
    if req.preset:
        return family_B_spec(preset=req.preset)
    if req.config:
        return family_spec_from_json(req.config)
    if req.family == "A" and req.ell:
        return family_A_spec(req.ell, req.rank)
    raise MalformedSpec("select a family with family+ell, preset, or config")


def _parse_levels(text: str) -> list[int]:
    text = text.strip()
    if ".." in text:
        lo, hi = text.split("..", 1)
        return list(range(int(lo), int(hi) + 1))
    return [int(x) for x in text.split(",") if x.strip()]


def _timed(report: VerificationReport, started: float) -> ReportResponse:
    report.duration_ms = (time.monotonic() - started) * 1000.0
    return ReportResponse(passed=report.passed,
                          report=report.to_dict(include_timings=True))


@app.get("/health", response_model=HealthResponse)
def health() -> HealthResponse:
    return HealthResponse(engine_version=ENGINE_VERSION)


@app.post("/chartab", response_model=TableResponse)
def chartab(req: ChartabRequest) -> TableResponse:
    started = time.monotonic()
    G = build_group(parse_group_spec(req.spec, _resolver(req.files)))
    table = character_table(G)
    table.verify_orthogonality()
    report = VerificationReport(command="chartab", inputs={"spec": req.spec})
    report.set_integer("order", G.order)
    report.set_integer("classes", table.count)
    report.set_integer("basis_order", table.basis_order)
    report.add_chain("table-invariants", [
        ("sum of squared degrees = |G|",
         sum(d * d for d in table.degrees), G.order),
        ("characters = classes", table.count, table.classes.count),
    ])
    report.duration_ms = (time.monotonic() - started) * 1000.0
    return TableResponse(passed=report.passed, table=table.to_json_dict(),
                         report=report.to_dict(include_timings=True))


@app.post("/lemma/thev", response_model=ReportResponse)
def lemma_thev(req: ThevRequest) -> ReportResponse:
    started = time.monotonic()
    G = build_group(parse_group_spec(req.spec, _resolver(req.files)))
    return _timed(verify_thev(G, req.ell), started)


@app.post("/lemma/little", response_model=ReportResponse)
def lemma_little(req: LittleRequest) -> ReportResponse:
    started = time.monotonic()
    resolver = _resolver(req.files)
    G = build_group(parse_group_spec(req.spec, resolver))
    model = build_group(parse_group_spec(req.normal, resolver))
    N = find_normal_subgroup_like(G, model)
    return _timed(little_groups_count(G, N), started)


@app.post("/lemma/chars", response_model=ReportResponse)
def lemma_chars(req: CharsRequest) -> ReportResponse:
    started = time.monotonic()
    x1 = parse_group_spec(req.x1, _resolver(req.files))
    return _timed(verify_chars(req.case, x1, req.e, req.ell), started)


@app.post("/awc", response_model=ReportResponse)
def awc(req: AwcRequest) -> ReportResponse:
    started = time.monotonic()
    return _timed(verify_awc(_family_from_request(req)), started)


@app.post("/am", response_model=ReportResponse)
def am(req: AmRequest) -> ReportResponse:
    started = time.monotonic()
    from ..tower import verify_am
    spec = _family_from_request(req)
    return _timed(verify_am(spec, _parse_levels(req.levels)), started)


@app.post("/connectivity", response_model=ReportResponse)
def connectivity(req: ConnectivityRequest) -> ReportResponse:
    started = time.monotonic()
    from ..tower import connectivity_check
    return _timed(connectivity_check(_family_from_request(req), req.level), started)


@app.post("/mu", response_model=ReportResponse)
def mu(req: MuRequest) -> ReportResponse:
    started = time.monotonic()
    return _timed(check_or1_hypotheses(_family_from_request(req), req.level), started)


@app.post("/sweep", response_model=ReportResponse)
def sweep(req: SweepRequest) -> ReportResponse:
    started = time.monotonic()
    return _timed(run_sweep(SweepConfig.from_json(req.config)), started)
