import math

import pytest
from fastapi.testclient import TestClient

from main import app


@pytest.fixture(scope="module")
def client():
    with TestClient(app) as test_client:
        yield test_client


def test_sante(client):
    assert client.get("/health").json() == {"status": "healthy"}
    assert client.get("/").json()["claims"] == 19


def test_evaluation(client):
    response = client.post("/api/orthogonality/eval", json={
        "relation": "hh_relative",
        "norm": {"kind": "lp", "p": 2},
        "x": [2.0, 0.0],
        "y": [0.45, math.sqrt(0.7975)],
        "eps": 0.15,
    })
    assert response.status_code == 200
    body = response.json()
    assert body["holds"] is False
    assert body["margin"] == pytest.approx(-0.1)


def test_evaluation_eps_invalide(client):
    response = client.post("/api/orthogonality/eval", json={
        "relation": "hh_relative", "x": [1.0, 0.0], "y": [0.0, 1.0], "eps": 1.2,
    })
    assert response.status_code == 400


def test_integrales_linf(client):
    response = client.post("/api/orthogonality/hh", json={
        "norm": {"kind": "lp", "p": "inf"}, "x": [1.0, 0.0], "y": [0.0, 1.0],
    })
    assert response.status_code == 200
    assert response.json()["i_plus"] == pytest.approx(7 / 12)


def test_analyse_application(client):
    response = client.post("/api/mapping/analyze", json={
        "map": {"matrix": [[2.0, 0.0], [0.0, 1.0]]}, "eps": 0.3, "samples": 200,
    })
    assert response.status_code == 200
    body = response.json()
    assert body["profile"]["eps_star"] == pytest.approx(0.6)
    assert body["bounds_12"]["passes"] is False


def test_solveurs(client):
    response = client.post("/api/solvers/pencil", json={"x": [1.0, 0.0], "y": [1.0, 1.0]})
    assert response.status_code == 200
    assert response.json()["location"] == pytest.approx(-1.0, abs=1e-9)
    assert client.post("/api/solvers/newton", json={"x": [1.0, 0.0], "y": [1.0, 1.0]}).status_code == 400


def test_assertions(client):
    assert len(client.get("/api/claims").json()) == 19
    response = client.post("/api/claims/run", json={"ids": ["C4"], "seed": 0, "trials": 500})
    assert response.status_code == 200
    assert response.json()[0]["status"] == "confirmed"
    assert client.post("/api/claims/run", json={"ids": ["C99"]}).status_code == 400
