import json

import pytest
from fastapi.testclient import TestClient

from pgo import __version__
from pgo.service.app import app


@pytest.fixture(scope="module")
def client():
    return TestClient(app)


def test_health(client):
    resp = client.get("/v1/health")
    assert resp.status_code == 200
    assert resp.json() == {"status": "ok", "version": __version__}


def test_potential_endpoint(client):
    resp = client.post(
        "/v1/potential", json={"lambda": -5.6, "mu": 0.2, "s": 3, "n_points": 4}
    )
    assert resp.status_code == 200
    body = resp.json()
    assert body["ok"] is True
    assert body["files"][0]["filename"] == "potential.csv"
    assert body["files"][0]["media_type"] == "text/csv"
    assert "r,v_pgo,v_ho,v_trunc" in body["files"][0]["content"]


def test_spectrum_endpoint(client):
    resp = client.post("/v1/spectrum", json={"lambda": 0.0, "mu": 1.0, "s": 1})
    assert resp.status_code == 200
    assert "n,energy,methods_agree,oracle_energy,abs_delta" in (
        resp.json()["files"][0]["content"]
    )


def test_wavefunction_endpoint(client):
    resp = client.post(
        "/v1/wavefunction",
        json={"lambda": 0.0, "mu": 0.2, "s": 5, "levels": [0], "n_points": 5,
              "r_max": 10.0},
    )
    assert resp.status_code == 200
    content = resp.json()["files"][0]["content"]
    assert "psi_0" in content
    assert "# inverse_a0_0" in content


def test_transmission_endpoint_two_files(client):
    resp = client.post(
        "/v1/transmission",
        json={"lambda": 0.0, "mu": 0.2, "s": 5,
              "potential_scale": 129.2776 / 2.5435343540873551, "sweep_count": 4},
    )
    assert resp.status_code == 200
    names = [f["filename"] for f in resp.json()["files"]]
    assert names == ["transmission.csv", "transmission_steps.csv"]


def test_validate_endpoint(client):
    resp = client.post("/v1/validate", json={"lambda": 0.0, "mu": 1.0, "s": 1})
    assert resp.status_code == 200
    body = resp.json()
    assert body["ok"] is True
    assert body["hard_failures"] == 0
    report = json.loads(body["files"][0]["content"])
    assert report["summary"]["passed"] is True


def test_config_error_maps_to_400(client):
    resp = client.post("/v1/potential", json={"mu": -2.0})
    assert resp.status_code == 400
    assert resp.json()["error"]["type"] == "ConfigError"


def test_schema_error_maps_to_422(client):
    resp = client.post("/v1/potential", json={"mu": "not-a-number"})
    assert resp.status_code == 422


def test_computation_error_maps_to_409(client):
    resp = client.post("/v1/spectrum", json={"lambda": -5.6, "mu": 0.2, "s": 3})
    assert resp.status_code == 409
    body = resp.json()
    assert body["error"]["type"] == "TailNotPositive"
    assert "Chat_7" in body["error"]["message"]


def test_json_format_pass_through(client):
    resp = client.post(
        "/v1/potential",
        json={"lambda": 0.0, "mu": 1.0, "s": 1, "n_points": 3, "format": "json"},
    )
    doc = resp.json()["files"][0]
    assert doc["filename"] == "potential.json"
    assert json.loads(doc["content"])["table"] == "potential"
