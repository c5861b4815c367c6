import pytest

pytest.importorskip("httpx")

from fastapi.testclient import TestClient  # noqa: E402

from mucalc.service import app  # noqa: E402

client = TestClient(app)


def test_health_and_scripts():
    assert client.get("/health").json()["status"] == "ok"
    assert "nat.mu" in client.get("/scripts").json()


def test_equiv():
    r = client.post("/equiv", json={"left": "pi1 <x, y>", "right": "x"})
    assert r.status_code == 200 and r.json()["records"][0]["verdict"] == "equal"
    r = client.post("/equiv", json={"left": "x", "right": "y", "vars": {"x": "P", "y": "P"}})
    assert r.json()["records"][0]["verdict"] == "distinct"


def test_errors_are_400():
    r = client.post("/equiv", json={"left": "\\x. x", "right": "x"})
    assert r.status_code == 400 and r.json()["exit_code"] == 2
    r = client.post("/run", json={"script": "const c : P; assert c == unit;"})
    assert r.status_code == 400 and "type error" in r.json()["error"]
    assert client.post("/demo/heap", json={}).status_code == 400


def test_normalize_focal_cps():
    r = client.post("/normalize", json={"exprs": ["pi2 <x, y>"]})
    assert r.json()["records"][0]["output"] == "y"
    r = client.post("/focal", json={"exprs": ["\\x:P. x"]})
    assert r.json()["records"][0]["verdict"] == "focal"
    r = client.post("/cps", json={"types": ["P -> Q"], "symbols": True})
    assert r.json()["records"][0]["output"] == "(P→R)×Q"


def test_scripts_and_demos():
    r = client.post("/run", json={"script": "assert forall x:P. pi1 <x, x> == x;"})
    assert r.json()["exit_code"] == 0
    assert client.post("/check", json={"script": "def i = \\x:P. x;"}).json()["exit_code"] == 0
    r = client.post("/demo/nat", json={"max": 3})
    assert r.json()["summary"]["passed"] == 3
    assert client.post("/demo/tree", json={"depth": 5}).status_code == 422
