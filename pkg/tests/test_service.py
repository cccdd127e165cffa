"""Session service: protocol, stale-revision guard, policy equivalence."""

import json
import threading
import urllib.error
import urllib.request

import pytest

from apf.runner import run_one
from apf.scenario import generate_scenario
from apf.service import make_server
from apf.traceio import trace_to_bytes


@pytest.fixture(scope="module")
def server():
    srv = make_server(0)
    thread = threading.Thread(target=srv.serve_forever, daemon=True)
    thread.start()
    yield f"http://127.0.0.1:{srv.server_address[1]}/api"
    srv.shutdown()


def call(url, doc, expect=200):
    req = urllib.request.Request(url, json.dumps(doc).encode(),
                                 {"Content-Type": "application/json"})
    try:
        with urllib.request.urlopen(req) as resp:
            assert resp.status == expect
            return json.loads(resp.read())
    except urllib.error.HTTPError as e:
        assert e.code == expect, e.read()
        return json.loads(e.read())


def test_session_lifecycle(server):
    sc = generate_scenario(4, 8, 3)
    out = call(server, {"op": "create-session", "scenario": json.loads(sc.to_json())})
    sid, rev = out["session"], out["revision"]
    st = out["state"]
    assert st["still"] and st["phase"] is not None and len(st["conds"]) == 11
    assert any(c["elected"] for c in st["candidates"])

    enabled = call(server, {"op": "list-enabled", "session": sid})["enabled"]
    assert {e["kind"] for e in enabled} == {"activate"}

    out = call(server, {"op": "apply-event", "session": sid, "revision": rev,
                        "event": enabled[0]})
    assert out["revision"] == rev + 1

    # stale client is told to refetch
    out = call(server, {"op": "apply-event", "session": sid, "revision": rev,
                        "event": enabled[0]}, expect=409)
    assert out["error"] == "stale-revision"

    out = call(server, {"op": "auto-step", "session": sid, "n": 10000,
                        "policy": "async-random", "seed": 3})
    assert out["state"]["verdict"] == "formed"

    out = call(server, {"op": "reset", "session": sid})
    assert out["state"]["verdict"] is None and out["state"]["events"] == 0


def test_disallowed_event_rejected(server):
    sc = generate_scenario(4, 8, 5)
    out = call(server, {"op": "create-session", "scenario": json.loads(sc.to_json())})
    sid, rev = out["session"], out["revision"]
    call(server, {"op": "apply-event", "session": sid, "revision": rev,
                  "event": {"kind": "arrive", "robot": 0}}, expect=400)


def test_interactive_equals_policy_trace(server):
    """Replaying async-random's own choices through apply-event reproduces
    the exact trace bytes the batch runner writes."""
    sc = generate_scenario(5, 9, 11)
    ref = run_one(sc, "async-random", 4, verify=False)
    assert ref.verdict == "formed"

    out = call(server, {"op": "create-session", "scenario": json.loads(sc.to_json())})
    sid, rev = out["session"], out["revision"]
    for rec in ref.trace:
        event = {"kind": "activate" if rec["ev"] in ("activate", "discard") else "arrive",
                 "robot": rec["robot"]}
        to = rec["to"] if rec["ev"] == "arrive" else None
        doc = {"op": "apply-event", "session": sid, "revision": rev, "event": event}
        if to is not None:
            doc["to"] = list(to)
        out = call(server, doc)
        rev = out["revision"]
    got = call(server, {"op": "get-trace", "session": sid})
    assert got["verdict"] == "formed"
    assert got["trace"].encode() == trace_to_bytes(ref.trace)
