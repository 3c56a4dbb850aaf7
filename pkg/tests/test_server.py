"""HTTP API: route shapes, error codes, session consistency."""

import json

import pytest
from fastapi.testclient import TestClient

from rpn.dsl import state_json
from rpn.server import create_app
from rpn.session import Session

from helpers import ALL_NETS


@pytest.fixture
def client():
    net, m0 = ALL_NETS["catalysis"]()
    session = Session.open(net, m0)
    with TestClient(create_app(session)) as c:
        c.session = session
        yield c


def test_net_description(client):
    data = client.get("/net").json()
    assert data["name"] == "catalysis"
    assert data["bases"] == ["a", "b", "c"]
    assert data["places"] == ["u", "v", "w", "x", "y"]
    assert data["transitions"] == ["t1", "t2"]
    by_ends = {(a["source"], a["target"]): a for a in data["arcs"]}
    t1x = by_ends[("t1", "x")]
    assert t1x["kind"] == "out"
    assert t1x["bases"] == ["a", "c"] and t1x["bonds"] == [["a", "c"]]
    assert data["initial"]["u"] == {"bases": ["c"], "bonds": []}


def test_state_matches_canonical_json(client):
    r = client.get("/state")
    assert r.status_code == 200
    assert r.text == state_json(client.session.net, client.session.current)
    assert r.json()["history"] == {"t1": None, "t2": None}


def test_enabled_after_two_firings(client):
    client.post("/fire", json={"transition": "t1"})
    client.post("/fire", json={"transition": "t2"})
    assert client.get("/enabled").json() == {
        "forward": [],
        "bt": ["t2"],
        "co": ["t2"],
        "o": ["t1", "t2"],
    }


def test_fire_returns_new_state(client):
    r = client.post("/fire", json={"transition": "t1"})
    assert r.status_code == 200
    data = r.json()
    assert data["history"]["t1"] == 1
    assert data["marking"]["x"]["bonds"] == [["a", "c"]]


def test_fire_disabled_is_409(client):
    r = client.post("/fire", json={"transition": "t2"})
    assert r.status_code == 409
    data = r.json()
    assert data["error"] == "NOT-ENABLED"
    assert data["action"] == "t2"
    assert data["enabled"]["forward"] == ["t1"]
    # the state is untouched
    assert client.get("/state").json()["history"]["t2"] is None


def test_fire_unknown_transition_is_409(client):
    assert client.post("/fire", json={"transition": "zz"}).status_code == 409


def test_reverse_modes(client):
    client.post("/fire", json={"transition": "t1"})
    client.post("/fire", json={"transition": "t2"})
    # bt refuses t1 (t2 holds the maximal key), o allows it
    r = client.post("/reverse", json={"transition": "t1", "mode": "bt"})
    assert r.status_code == 409 and r.json()["error"] == "NOT-ENABLED"
    r = client.post("/reverse", json={"transition": "t1", "mode": "o"})
    assert r.status_code == 200
    data = r.json()
    assert data["history"] == {"t1": None, "t2": 2}
    assert data["marking"]["u"] == {"bases": ["c"], "bonds": []}
    assert data["marking"]["y"] == {"bases": ["a", "b"], "bonds": [["a", "b"]]}


def test_reverse_rejects_bad_mode_payload(client):
    r = client.post("/reverse", json={"transition": "t1", "mode": "sideways"})
    assert r.status_code == 422


def test_trace_endpoint(client):
    client.post("/fire", json={"transition": "t1"})
    client.post("/fire", json={"transition": "t2"})
    client.post("/reverse", json={"transition": "t1", "mode": "o"})
    data = client.get("/trace").json()
    assert data["trace"] == "t1,t2,~t1:o"
    assert data["actions"][0] == {
        "transition": "t1",
        "direction": "forward",
        "mode": None,
    }
    assert data["actions"][2] == {
        "transition": "t1",
        "direction": "reverse",
        "mode": "o",
    }


def test_undo_and_reset(client):
    before = client.get("/state").text
    client.post("/fire", json={"transition": "t1"})
    r = client.post("/undo")
    assert r.status_code == 200
    assert client.get("/state").text == before

    r = client.post("/undo")
    assert r.status_code == 409 and r.json() == {"error": "EMPTY-UNDO"}

    client.post("/fire", json={"transition": "t1"})
    client.post("/fire", json={"transition": "t2"})
    assert client.post("/reset").status_code == 200
    assert client.get("/state").text == before
    assert client.get("/trace").json()["trace"] == ""
    # reset itself is one undoable step
    client.post("/undo")
    assert client.get("/trace").json()["trace"] == "t1,t2"


def test_responses_are_pure_views_of_the_session(client):
    client.post("/fire", json={"transition": "t1"})
    assert json.loads(state_json(client.session.net, client.session.current)) == (
        client.get("/state").json()
    )
    assert client.get("/enabled").json() == client.session.enabled()
