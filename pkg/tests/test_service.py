"""HTTP surface: endpoints, error envelopes, response shapes."""

from __future__ import annotations

import warnings

import pytest

with warnings.catch_warnings():
    warnings.simplefilter("ignore")
    from fastapi.testclient import TestClient

from fusionweights import ENGINE_VERSION
from fusionweights.service.app import app


@pytest.fixture(scope="module")
def client():
    return TestClient(app)


def test_health(client):
    doc = client.get("/health").json()
    assert doc == {"engine_version": ENGINE_VERSION, "status": "ok"}


def test_chartab_endpoint(client):
    res = client.post("/chartab", json={"spec": "C3"})
    assert res.status_code == 200
    doc = res.json()
    assert doc["passed"] is True
    assert doc["table"]["basis_order"] == 3
    assert len(doc["table"]["characters"]) == 3
    assert doc["report"]["integers"]["classes"] == 3


def test_thev_endpoint(client):
    res = client.post("/lemma/thev", json={"spec": "S5", "ell": 5})
    doc = res.json()
    assert doc["passed"] is True
    ints = doc["report"]["integers"]
    assert (ints["irr_W"] - ints["z_W"], ints["irr_NWU"],
            ints["irr0_NWU"], ints["irr0_W"]) == (5, 5, 5, 5)


def test_little_endpoint(client):
    res = client.post("/lemma/little", json={"spec": "S3", "normal": "C3"})
    doc = res.json()
    assert doc["passed"] is True
    assert doc["report"]["integers"]["pair_count"] == 3


def test_chars_endpoint(client):
    res = client.post("/lemma/chars",
                      json={"case": 1, "x1": "C2", "e": 2, "ell": 3})
    doc = res.json()
    assert doc["passed"] is True
    assert doc["report"]["integers"]["z_H"] == 2


def test_awc_endpoints(client):
    res = client.post("/awc", json={"family": "A", "ell": 5})
    doc = res.json()
    assert doc["passed"] and doc["report"]["integers"]["weight_count"] == 5
    res = client.post("/awc", json={"preset": "G2"})
    doc = res.json()
    assert doc["passed"] and doc["report"]["integers"]["weight_count"] == 6


def test_am_endpoint(client):
    res = client.post("/am", json={"family": "A", "ell": 3, "levels": "1..2"})
    doc = res.json()
    assert doc["passed"] is True
    assert [r["m"] for r in doc["report"]["records"]] == [6, 6]


def test_connectivity_endpoint(client):
    res = client.post("/connectivity", json={"preset": "G2", "level": 1})
    assert res.json()["passed"] is True


def test_mu_endpoint(client):
    res = client.post("/mu", json={"preset": "G2", "level": 2})
    doc = res.json()
    assert doc["passed"] is True
    assert doc["report"]["inputs"]["consistent_case"] == 1


def test_sweep_endpoint(client):
    config = {"command": "thev", "grid": {"group": ["S3", "S5"], "ell": [3]}}
    res = client.post("/sweep", json={"config": config})
    doc = res.json()
    # S5 at ell=3 has v_3 = 1, so both cells apply and pass
    assert doc["report"]["integers"]["cells"] == 2
    assert doc["report"]["integers"]["pass"] == 2


def test_error_envelope(client):
    res = client.post("/chartab", json={"spec": "Q8"})
    assert res.status_code == 422
    body = res.json()
    assert body["error"]["type"] == "UnknownAtom"
    res = client.post("/lemma/thev", json={"spec": "S4", "ell": 2})
    assert res.status_code == 422
    assert body["error"]["message"]


def test_inline_file_atom(client):
    files = {"@inline.json": {"kind": "perm", "generators": [[1, 2, 3, 0]]}}
    res = client.post("/chartab", json={"spec": "@inline.json", "files": files})
    doc = res.json()
    assert doc["table"]["order"] == 4


def test_duration_present_in_live_response(client):
    res = client.post("/awc", json={"family": "A", "ell": 3})
    assert "duration_ms" in res.json()["report"]


def test_config_based_family_through_service(client):
    config = {
        "ell": 3, "variant": "B", "t": 0, "x1": "C2", "e": 2,
        "action": {"rank": 2,
                   "generators": [[[-1, 1], [0, 1]], [[1, 0], [3, -1]]],
                   "u": [0, 1, 0, 1]},
    }
    res = client.post("/awc", json={"config": config})
    doc = res.json()
    assert doc["passed"] is True
    assert doc["report"]["integers"]["weight_count"] == 6
    res = client.post("/am", json={"config": config, "levels": "1..2"})
    doc = res.json()
    assert doc["passed"] is True
    assert all(r["verdicts"]["m_equals_r"] for r in doc["report"]["records"])


def test_family_selector_validation(client):
    res = client.post("/awc", json={})
    assert res.status_code == 422
    res = client.post("/awc", json={"preset": "nope"})
    assert res.status_code == 422
