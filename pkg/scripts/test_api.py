#!/usr/bin/env python3
"""
HTTP layer: routes under /api/heisgeom, schema-stamped reports and error
objects with 422 for input errors and 400 for engine errors.
"""
import json
import sys
from pathlib import Path

import pytest
from fastapi.testclient import TestClient

# Add parent to path
sys.path.insert(0, str(Path(__file__).parent.parent))

from app.main import app

PREFIX = "/api/heisgeom"


@pytest.fixture
def client():
    with TestClient(app) as c:
        yield c


def test_health(client):
    assert client.get("/health").json()["status"] == "UP"
    assert client.get(f"{PREFIX}/health").json() == {"status": "UP", "service": "heisgeom"}
    info = client.get(f"{PREFIX}/info").json()
    assert info["schema"] == 1


def test_root_lists_endpoints(client):
    endpoints = client.get("/").json()["endpoints"]
    assert endpoints["curve"] == f"{PREFIX}/curve"
    assert endpoints["gallery"] == f"{PREFIX}/gallery"


def test_curve(client):
    response = client.post(f"{PREFIX}/curve", json={"expr": "cos(t), sin(t), 0", "t": [0.0, 1.0, 2.0]})
    assert response.status_code == 200
    data = response.json()
    assert data["schema"] == 1
    assert data["value"] == pytest.approx([2.0, 2.0, 2.0], abs=1e-12)


def test_planar_curve_is_lifted(client):
    response = client.post(f"{PREFIX}/curve", json={"expr": "cos(t), sin(t)", "planar": True, "t": [0.5]})
    assert response.status_code == 200
    data = response.json()
    assert data["classes"] == ["horizontal"]
    assert data["value"] == pytest.approx([1.0], abs=1e-12)


def test_surface(client):
    response = client.post(f"{PREFIX}/surface", json={"u": "x3", "points": [[1, 0, 0], [0, 2, 0]]})
    assert response.status_code == 200
    assert response.json()["value"] == pytest.approx([-2.0, -0.5], rel=1e-12)

    finite = client.post(f"{PREFIX}/surface", json={"u": "x1 - 1", "points": [[1, 0.5, 0]],
                                                      "quantity": "KL", "L": [4.0]})
    assert finite.status_code == 200
    assert finite.json()["values"]["4.0"] == pytest.approx([0.0], abs=1e-10)


def test_parse_error_is_422(client):
    response = client.post(f"{PREFIX}/surface", json={"u": "x3 +", "points": [[1, 0, 0]]})
    assert response.status_code == 422
    detail = response.json()["detail"]
    assert detail["schema"] == 1
    assert detail["error"]["kind"] == "parse_error"


def test_engine_error_is_400(client):
    response = client.post(f"{PREFIX}/surface", json={"u": "x3", "points": [[0, 0, 0]]})
    assert response.status_code == 400
    assert response.json()["detail"]["error"]["kind"] == "characteristic_point"


def test_gauss_bonnet_scene(client, scene_path):
    scene = json.loads(scene_path("planar-off-axis-disk").read_text(encoding="utf-8"))
    response = client.post(f"{PREFIX}/gauss-bonnet", json={"scene": scene})
    assert response.status_code == 200
    assert response.json()["defect"] == pytest.approx(0.0, abs=1e-8)

    scene.pop("u")
    assert client.post(f"{PREFIX}/gauss-bonnet", json={"scene": scene}).status_code == 422


def test_gallery(client):
    names = [e["name"] for e in client.get(f"{PREFIX}/gallery/").json()["entries"]]
    assert "horizontal-plane" in names

    response = client.post(f"{PREFIX}/gallery/unit-circle", json={"samples": 5, "seed": 1})
    assert response.status_code == 200
    assert response.json()["passed"] is True

    missing = client.post(f"{PREFIX}/gallery/moebius")
    assert missing.status_code == 422
    assert missing.json()["detail"]["error"]["kind"] == "unknown_entry"
