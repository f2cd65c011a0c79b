import pytest
from fastapi.testclient import TestClient

from app.main import app
from tests.conftest import TRIANGLE, cycle_edges, star_edges


# ---------------------------------------------------------------------------
# Helper Fixtures and Functions
# ---------------------------------------------------------------------------
@pytest.fixture
def client():
    with TestClient(app) as test_client:
        yield test_client


def walk_payload(**overrides) -> dict:
    payload = {
        "graph": {"edges": TRIANGLE},
        "model": "coin",
        "unitaries": {"coin": {"default": "grover"}},
        "initial": [{"node": 0, "port": 1, "amp": [1.0, 0.0]}],
        "steps": 3,
    }
    payload.update(overrides)
    return payload


# ---------------------------------------------------------------------------
# Health and Graph Endpoint Tests
# ---------------------------------------------------------------------------
@pytest.mark.e2e
def test_health_endpoint(client):
    response = client.get("/health")
    assert response.status_code == 200, f"Expected status code 200 but got {response.status_code}. Response: {response.text}"
    assert response.json() == {"status": "ok"}, "Unexpected response from /health."


@pytest.mark.e2e
def test_validate_graph(client):
    response = client.post("/graphs/validate", json={"edges": TRIANGLE, "scattering_ports": {"0": [2, 1]}})
    assert response.status_code == 200, response.text
    assert response.json() == {"violations": [], "valid": True}


@pytest.mark.e2e
def test_validate_graph_self_loop(client):
    response = client.post("/graphs/validate", json={"edges": [[0, 0]]})
    assert response.status_code == 400
    assert response.json()["detail"].startswith("ParseError: Self-loop")


@pytest.mark.e2e
def test_validate_graph_schema_error(client):
    response = client.post("/graphs/validate", json={"edges": [[0, 1]], "colour": "red"})
    assert response.status_code == 422


# ---------------------------------------------------------------------------
# Walk Endpoint Tests
# ---------------------------------------------------------------------------
@pytest.mark.e2e
def test_simulate_hadamard_line(client):
    n = 64
    response = client.post("/simulate", json=walk_payload(
        graph={
            "edges": cycle_edges(n),
            "ports": {str(j): [(j + 1) % n, (j - 1) % n] for j in range(n)},
            "mu": {str(j): {"1": 1, "2": 2} for j in range(n)},
        },
        unitaries={"coin": {"default": "hadamard"}},
    ))
    assert response.status_code == 200, response.text
    data = response.json()
    assert data["mode"] == "coin-nodes"
    assert len(data["steps"]) == 4
    last = data["steps"][3]
    assert last["n1"] == pytest.approx(0.625, abs=1e-12)
    assert last["n63"] == pytest.approx(0.125, abs=1e-12)


@pytest.mark.e2e
def test_simulate_scattering_native_mode(client):
    response = client.post("/simulate", json=walk_payload(
        model="scattering", unitaries={"gamma": {"default": "dft"}}, steps=5,
    ))
    assert response.status_code == 200, response.text
    data = response.json()
    assert data["mode"] == "scattering-edges"
    assert sum(data["steps"][-1].values()) == pytest.approx(1.0, abs=1e-12)


@pytest.mark.e2e
def test_simulate_non_unitary_coin(client):
    response = client.post("/simulate", json=walk_payload(
        unitaries={"coin": {"default": "grover", "overrides": {"0": [[[1, 0], [1, 0]], [[0, 0], [1, 0]]]}}},
    ))
    assert response.status_code == 422
    assert response.json()["detail"].startswith("UnitarityViolation")


@pytest.mark.e2e
def test_simulate_dimension_error(client):
    response = client.post("/simulate", json=walk_payload(
        graph={"edges": star_edges(3)}, unitaries={"coin": {"default": "hadamard"}},
    ))
    assert response.status_code == 400
    assert response.json()["detail"].startswith("DimensionMismatch")


@pytest.mark.e2e
def test_cross_probability(client):
    response = client.post("/cross-probability", json=walk_payload(
        model="scattering", unitaries={"gamma": {"default": "grover"}}, steps=6,
    ))
    assert response.status_code == 200, response.text
    data = response.json()
    assert data["native"]["mode"] == "scattering-edges"
    assert data["cross"]["mode"] == "cross"
    coin = client.post("/simulate", json=walk_payload(steps=6)).json()
    for cross_step, coin_step in zip(data["cross"]["steps"], coin["steps"]):
        for label, value in coin_step.items():
            assert cross_step[label] == pytest.approx(value, abs=1e-12)


# ---------------------------------------------------------------------------
# Equivalence Endpoint Tests
# ---------------------------------------------------------------------------
@pytest.mark.e2e
def test_equivalence_passes(client):
    response = client.post("/equivalence", json={
        "graph": {"edges": TRIANGLE, "mu": {"1": {"1": 2}, "2": {"1": 1}}},
        "coin": {"coin": {"default": "random", "seed": 11}},
    })
    assert response.status_code == 200, response.text
    report = response.json()["report"]
    assert report["passed"] is True
    assert report["dimension"] == 6


@pytest.mark.e2e
def test_equivalence_failure_is_reported(client):
    response = client.post("/equivalence", json={
        "graph": {"edges": TRIANGLE},
        "coin": {"coin": {"default": "grover"}},
        "gamma": {"gamma": {"default": "identity"}},
    })
    assert response.status_code == 200, response.text
    assert response.json()["report"]["passed"] is False


@pytest.mark.e2e
def test_equivalence_wrong_key(client):
    response = client.post("/equivalence", json={
        "graph": {"edges": TRIANGLE},
        "coin": {"gamma": {"default": "grover"}},
    })
    assert response.status_code == 422
