"""Command-line client for the verification service.

The CLI marshals arguments into service requests and renders responses; it
owns no verification logic.  By default it drives the FastAPI app
in-process over an ASGI transport, so no server is needed; --server points
it at a remote instance instead.

Exit status: 0 when every verdict in the report passes, 1 on a failing
verdict, 2 on errors (bad input, unreachable server), with a
machine-readable error record on stderr.

Custom group documents (the @file.json atom) use the schema
{"kind": "perm" | "mat", "modulus": m, "generators": [...]}: permutation
generators are 0-indexed image lists; matrix generators are row-major
square matrices over Z/m (modulus 0 means exact integer entries).

The closure budget (default 100000 elements) can be overridden with the
FUSIONWEIGHTS_BUDGET environment variable.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from pathlib import Path

import httpx

from . import ENGINE_VERSION
from .reports import records_to_tsv

_FILE_ATOM = re.compile(r"@[A-Za-z0-9_.\-/]+")


def _client(server: str | None):
    if server:
        return httpx.Client(base_url=server, timeout=600.0)
    import warnings

    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        from fastapi.testclient import TestClient

    from .service.app import app
    return TestClient(app)


def _collect_files(*specs: str) -> dict:
    files = {}
    for spec in specs:
        if not spec:
            continue
        for token in _FILE_ATOM.findall(spec):
            files[token] = json.loads(Path(token[1:]).read_text())
    return files


def _family_payload(args) -> dict:
    payload = {}
    if getattr(args, "preset", None):
        payload["preset"] = args.preset
    elif getattr(args, "config", None):
        payload["config"] = json.loads(Path(args.config).read_text())
    else:
        payload["family"] = args.family
        payload["ell"] = args.ell
        if getattr(args, "rank", None):
            payload["rank"] = args.rank
    return payload


def _emit(args, doc: dict) -> int:
    report = doc.get("report", doc)
    if not args.timings:
        report = {k: v for k, v in report.items() if k != "duration_ms"}
    body = dict(doc)
    body["report"] = report
    if args.format == "tsv":
        text = records_to_tsv(report.get("records", []))
    elif args.pretty:
        text = json.dumps(body, indent=2, sort_keys=True)
    else:
        text = json.dumps(body, sort_keys=True, separators=(",", ":"))
    if args.out:
        Path(args.out).write_text(text + ("" if text.endswith("\n") else "\n"))
    else:
        print(text)
    return 0 if doc.get("passed") else 1


def _post(args, path: str, payload: dict) -> int:
    try:
        with _client(args.server) as client:
            response = client.post(path, json=payload)
    except httpx.HTTPError as exc:
        print(json.dumps({"error": {"type": "TransportError", "message": str(exc)}}),
              file=sys.stderr)
        return 2
    if response.status_code != 200:
        try:
            body = response.json()
        except ValueError:
            body = {"error": {"type": "HTTPError", "message": response.text}}
        print(json.dumps(body, sort_keys=True), file=sys.stderr)
        return 2
    return _emit(args, response.json())


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--server", help="remote service URL (default: in-process)")
    common.add_argument("--out", help="write the report to this file")
    common.add_argument("--format", choices=("json", "tsv"), default="json")
    common.add_argument("--pretty", action="store_true", help="indent JSON output")
    common.add_argument("--timings", action="store_true",
                        help="include wall-clock timings (non-reproducible field)")

    parser = argparse.ArgumentParser(
        prog="fusionweights",
        description="exact weight-count and character-count verification",
        parents=[common],
    )
    parser.add_argument("--version", action="version", version=ENGINE_VERSION)
    sub = parser.add_subparsers(dest="command", required=True)

    serve = sub.add_parser("serve", help="run the HTTP service", parents=[common])
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8000)

    chartab = sub.add_parser("chartab", parents=[common],
                             help="exact character table of a group")
    chartab.add_argument("spec")

    lemma = sub.add_parser("lemma", help="single counting identities")
    lemma_sub = lemma.add_subparsers(dest="lemma_command", required=True)
    thev = lemma_sub.add_parser("thev", parents=[common],
                                help="cyclic-Sylow counting chain")
    thev.add_argument("spec")
    thev.add_argument("--ell", type=int, required=True)
    little = lemma_sub.add_parser("little", parents=[common],
                                  help="method-of-little-groups count")
    little.add_argument("spec")
    little.add_argument("--normal", required=True)
    chars = lemma_sub.add_parser("chars", parents=[common],
                                 help="fiber-product character counts")
    chars.add_argument("--case", type=int, choices=(1, 2), required=True)
    chars.add_argument("--x1", default="C1")
    chars.add_argument("--e", type=int, required=True)
    chars.add_argument("--ell", type=int, required=True)

    def add_family_args(p, with_levels=None, with_level=None):
        p.add_argument("--family", choices=("A",))
        p.add_argument("--ell", type=int)
        p.add_argument("--preset")
        p.add_argument("--config", help="family spec JSON file")
        p.add_argument("--rank", type=int)
        if with_levels:
            p.add_argument("--levels", default="1..1", help="a..b or comma list")
        if with_level:
            p.add_argument("--level", type=int, default=1)

    awc = sub.add_parser("awc", parents=[common],
                         help="weight count against |Irr(W)|")
    add_family_args(awc)
    am = sub.add_parser("am", parents=[common],
                        help="per-level orbit-pair equality")
    add_family_args(am, with_levels=True)
    conn = sub.add_parser("connectivity", parents=[common],
                          help="outer classes fused into the torus")
    add_family_args(conn, with_level=True)
    mu = sub.add_parser("mu", parents=[common],
                        help="mu-pair hypotheses at a level")
    add_family_args(mu, with_level=True)

    sweep = sub.add_parser("sweep", parents=[common], help="run a parameter grid")
    sweep.add_argument("--config", required=True, help="sweep config JSON file")
    sweep.add_argument("--workers", type=int, default=0)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "serve":
            import uvicorn
            from .service.app import app
            uvicorn.run(app, host=args.host, port=args.port)
            return 0
        if args.command == "chartab":
            return _post(args, "/chartab",
                         {"spec": args.spec, "files": _collect_files(args.spec)})
        if args.command == "lemma":
            if args.lemma_command == "thev":
                return _post(args, "/lemma/thev", {
                    "spec": args.spec, "ell": args.ell,
                    "files": _collect_files(args.spec),
                })
            if args.lemma_command == "little":
                return _post(args, "/lemma/little", {
                    "spec": args.spec, "normal": args.normal,
                    "files": _collect_files(args.spec, args.normal),
                })
            return _post(args, "/lemma/chars", {
                "case": args.case, "x1": args.x1, "e": args.e, "ell": args.ell,
                "files": _collect_files(args.x1),
            })
        if args.command == "awc":
            return _post(args, "/awc", _family_payload(args))
        if args.command == "am":
            payload = _family_payload(args)
            payload["levels"] = args.levels
            return _post(args, "/am", payload)
        if args.command == "connectivity":
            payload = _family_payload(args)
            payload["level"] = args.level
            return _post(args, "/connectivity", payload)
        if args.command == "mu":
            payload = _family_payload(args)
            payload["level"] = args.level
            return _post(args, "/mu", payload)
        if args.command == "sweep":
            config = json.loads(Path(args.config).read_text())
            if args.workers:
                config["workers"] = args.workers
            return _post(args, "/sweep", {"config": config})
    except (OSError, json.JSONDecodeError) as exc:
        print(json.dumps({"error": {"type": type(exc).__name__, "message": str(exc)}}),
              file=sys.stderr)
        return 2
    return 2


if __name__ == "__main__":
    sys.exit(main())
