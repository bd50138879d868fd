"""
API Tests

Tests for FastAPI endpoints using TestClient.

Run: pytest tests/test_api.py -v
"""

import pytest


# ==================== Test Client Fixture ====================

@pytest.fixture
def client():
    """Create FastAPI TestClient."""
    try:
        from fastapi.testclient import TestClient
        from ffdrive.main import app
        return TestClient(app)
    except ImportError as e:
        pytest.skip(f"Cannot import ffdrive.main: {e}")


# ==================== Health and Root Endpoints ====================

def test_root_endpoint(client):
    response = client.get("/")
    assert response.status_code == 200
    assert response.json()["service"] == "ffdrive"


def test_health_endpoint(client):
    response = client.get("/health")

    assert response.status_code == 200
    data = response.json()
    assert data["status"] == "healthy"
    assert data["components"]["runner"] == "ok"
    assert data["builtins"] == 5


def test_scenario_routes_mounted(client):
    paths = {route.path for route in client.app.routes}
    assert {"/api/scenarios", "/api/scenarios/run", "/api/scenarios/sweep"} <= paths


# ==================== Scenario Endpoints ====================

def test_list_scenarios(client):
    response = client.get("/api/scenarios")

    assert response.status_code == 200
    data = response.json()
    assert [item["name"] for item in data][:2] == ["expansion", "harmonic-to-linear"]
    assert len(data) == 5
    g2e = next(item for item in data if item["name"] == "ground-to-excited")
    assert g2e["truncation"] == 8.0
    assert g2e["interpolation"] == "signed"


def test_run_unknown_scenario(client):
    response = client.post("/api/scenarios/run", json={"scenario": "teleport"})

    assert response.status_code == 404
    detail = response.json()["detail"]
    assert detail["code"] == "not_found"
    assert detail["category"] == "config_error"


def test_run_rejects_unknown_fields(client):
    response = client.post("/api/scenarios/run", json={"scenario": "expansion", "speed": 11})
    assert response.status_code == 422


def test_run_invalid_override(client):
    response = client.post("/api/scenarios/run", json={"scenario": "expansion", "grid_n": 1000})

    assert response.status_code == 400
    assert response.json()["detail"]["code"] == "validation_error"


def test_run_coarse_expansion(client):
    response = client.post(
        "/api/scenarios/run",
        json={"scenario": "expansion", "grid_n": 256, "n_t": 200},
    )

    assert response.status_code == 200
    data = response.json()
    assert data["scenario"] == "expansion"
    assert data["fidelity"] >= 0.999
    assert data["outputs"] == {}
    assert data["units"] == "hbar=m=1"


def test_sweep_rejects_unsorted_levels(client):
    response = client.post("/api/scenarios/sweep", json={"scenario": "expansion", "c": [4.0, 2.0]})
    assert response.status_code == 400
    assert response.json()["detail"]["code"] == "validation_error"


def test_sweep_coarse_expansion(client):
    response = client.post(
        "/api/scenarios/sweep",
        json={"scenario": "expansion", "c": [2.0, 8.0], "grid_n": 256},
    )

    assert response.status_code == 200
    data = response.json()
    assert [row["c"] for row in data["rows"]] == [2.0, 8.0]
    assert all(row["fidelity"] is not None for row in data["rows"])
