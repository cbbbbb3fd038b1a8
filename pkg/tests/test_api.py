import pytest
from fastapi.testclient import TestClient

from app.api.main import app
from app.config import settings

SMALL = {"resolution": "32x32"}


@pytest.fixture
def client():
    return TestClient(app)


def test_health(client):
    response = client.get("/health")
    assert response.status_code == 200
    assert response.json()["status"] == "ok"


def test_builtins(client):
    body = client.get("/scenarios/builtins").json()
    assert "punctured_plane" in body["builtins"]
    assert "ladder" in body["commands"]


def test_dist(client):
    response = client.post(
        "/scenarios/dist",
        json={"builtin": "zero_wind", **SMALL, "horizon": 1.5, "params": {"x": "0,0", "y": "1,0"}},
    )
    assert response.status_code == 200
    body = response.json()
    assert body["command"] == "dist"
    assert body["status"] == "completed"
    assert body["result"]["value"] == pytest.approx(1.0, abs=0.4)
    assert "dist.json" in body["artifacts"]


def test_scenario_text(client):
    text = 'format = 1\n[domain]\nbox = [-1.0, 1.0, -1.0, 1.0]\nresolution = [16, 16]\n[wind]\nwx = 0.0\nwy = 0.0\n'
    response = client.post("/scenarios/regions", json={"scenario": text})
    assert response.status_code == 200
    assert response.json()["result"]["killing_character"] == "timelike"


def test_config_diagnostics(client):
    response = client.post("/scenarios/regions", json={"scenario": "format = 1\ncolour = 1\n"})
    assert response.status_code == 400
    messages = [d["message"] for d in response.json()["detail"]]
    assert "unknown key 'colour'" in messages


@pytest.mark.parametrize(
    "path, body",
    [
        ("/scenarios/regions", {"builtin": "hurricane"}),
        ("/scenarios/teleport", {"builtin": "zero_wind"}),
        ("/scenarios/regions", {"builtin": "zero_wind", "resolution": "big"}),
        ("/scenarios/dist", {"builtin": "zero_wind", **SMALL, "params": {"x": "0,0"}}),
        ("/scenarios/dist", {"builtin": "zero_wind", **SMALL, "params": {"x": "0,0", "y": "9,9"}}),
        ("/scenarios/crosscheck", {"builtin": "zero_wind", **SMALL, "params": {"center": "0,0", "r": 0.5, "count": 50}}),
    ],
)
def test_bad_requests(client, path, body):
    assert client.post(path, json=body).status_code == 400


@pytest.mark.parametrize("body", [{}, {"builtin": "zero_wind", "scenario": "format = 1\n"}])
def test_exactly_one_source(client, body):
    assert client.post("/scenarios/regions", json=body).status_code == 422


def test_numerical_failure(client):
    response = client.post(
        "/scenarios/geodesic",
        json={"builtin": "strong_constant", **SMALL, "params": {"start": "0,0", "velocity": "0,1", "length": 1.0}},
    )
    assert response.status_code == 422
    assert "not admissible" in response.json()["detail"]


def test_api_key(client, monkeypatch):
    monkeypatch.setattr(settings, "api_key", "secret")
    body = {"builtin": "zero_wind", **SMALL}
    assert client.post("/scenarios/regions", json=body).status_code == 401
    assert client.post("/scenarios/regions", json=body, headers={"X-API-Key": "secret"}).status_code == 200
