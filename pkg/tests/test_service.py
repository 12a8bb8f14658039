import warnings

import pytest

with warnings.catch_warnings():
    warnings.simplefilter("ignore")
    from fastapi.testclient import TestClient

from greenlab.service.app import app


@pytest.fixture(scope="module")
def client():
    return TestClient(app)


def test_health(client):
    resp = client.get("/health")
    assert resp.status_code == 200
    assert resp.json()["status"] == "ok"


def test_validate_domain(client):
    resp = client.post("/domains/validate", json={"kind": "Annulus", "r": 0.5})
    assert resp.status_code == 200
    body = resp.json()
    assert body["kind"] == "Annulus" and body["curves"] == 2


def test_validate_rejects_extra_fields(client):
    resp = client.post("/domains/validate", json={"kind": "Annulus", "r": 0.5, "x": 1})
    assert resp.status_code == 422


def test_run_robin(client):
    resp = client.post("/run/robin", json={
        "domain": {"kind": "UnitDisc"},
        "params": {"p": [0.5, 0.0]},
    })
    assert resp.status_code == 200
    body = resp.json()
    assert body["status"] == "ok"
    assert body["summary"]["capacity"] == pytest.approx(4 / 3)
    names = {a["name"] for a in body["artifacts"]}
    assert names == {"robin_report.json", "robin_report.csv"}


def test_run_unknown_command(client):
    resp = client.post("/run/frobnicate", json={})
    assert resp.status_code == 404


def test_run_missing_parameter(client):
    resp = client.post("/run/robin", json={"domain": {"kind": "UnitDisc"}})
    assert resp.status_code == 422
    assert "p" in resp.json()["detail"]


def test_run_unknown_parameter(client):
    resp = client.post("/run/robin", json={
        "domain": {"kind": "UnitDisc"}, "params": {"p": [0.5, 0], "bogus": 1},
    })
    assert resp.status_code == 422
    assert "bogus" in resp.json()["detail"]


def test_run_asymptotics_tolerance_failure(client):
    resp = client.post("/run/asymptotics", json={
        "domain": {"kind": "Annulus", "r": 0.5},
        "params": {"p0": [1.0, 0.0], "J": 6},
        "tolerances": {"final_residual": 1e-12},
    })
    assert resp.status_code == 200
    body = resp.json()
    assert body["status"] == "tolerance_failure"
    assert "first_failure" in body["summary"]


def test_run_requires_domain(client):
    resp = client.post("/run/geodesic", json={"params": {"z0": [0.0, 0.0]}})
    assert resp.status_code == 422


def test_deterministic_artifacts(client):
    req = {
        "domain": {"kind": "Annulus", "r": 0.5},
        "params": {"p0": [1.0, 0.0], "J": 5},
        "seed": 7,
    }
    first = client.post("/run/asymptotics", json=req).json()
    second = client.post("/run/asymptotics", json=req).json()
    texts1 = {a["name"]: a["text"] for a in first["artifacts"]}
    texts2 = {a["name"]: a["text"] for a in second["artifacts"]}
    assert texts1 == texts2
    hashes1 = {a["name"]: a["sha256"] for a in first["artifacts"]}
    hashes2 = {a["name"]: a["sha256"] for a in second["artifacts"]}
    assert hashes1 == hashes2


def test_run_critical(client):
    resp = client.post("/run/critical", json={
        "domain": {"kind": "Annulus", "r": 0.5},
        "params": {"zeta": [0.7, 0.0]},
    })
    assert resp.status_code == 200
    body = resp.json()
    assert body["summary"]["count"] == 1


def test_run_bergman(client):
    resp = client.post("/run/bergman", json={
        "domain": {"kind": "UnitDisc"},
        "params": {"z": [0.3, 0.0], "w": [-0.4, 0.0]},
    })
    assert resp.status_code == 200
    body = resp.json()
    assert body["summary"]["identity_residual"] < 1e-12
    diag = client.post("/run/bergman", json={
        "domain": {"kind": "UnitDisc"},
        "params": {"z": [0.0, 0.0], "w": [0.0, 0.0]},
    })
    assert diag.status_code == 200
    assert diag.json()["summary"]["identity_residual"] is None
