"""Local session service: step-by-step simulation control over HTTP.

One endpoint, ``POST /api``, takes JSON messages ``{"op": ..., ...}``:

    create-session {scenario}            -> {session, revision, state}
    get-state      {session}             -> {revision, state}
    list-enabled   {session}             -> {revision, enabled: [...]}
    apply-event    {session, revision, event: {kind, robot}, to?}
    auto-step      {session, n, policy, seed?}
    reset          {session}
    get-trace      {session}             -> {trace: "<jsonl>"}

``apply-event`` rejects requests whose ``revision`` is stale, so a console
that raced another mutation refetches instead of corrupting the run.  All
algorithm logic stays server-side; the console renders only what get-state
returns.  GET serves the console's static assets.  Strictly local and
unauthenticated: this exists to drive the console, not for deployment.
"""

from __future__ import annotations

import json
import os
import threading
import uuid
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

from . import traceio
from .engine import SimViolation
from .geometry import ElectionError, candidate_strings, Configuration
from .grid import GuardError
from .line import LineError
from .policies import make_policy
from .runner import build_engine
from .scenario import Scenario, ScenarioError, parse_scenario
from .verify import compute_metrics, scenario_bounds


class Session:
    def __init__(self, scenario: Scenario):
        self.scenario = scenario
        self.lock = threading.Lock()
        self.revision = 0
        self.verdict: str | None = None
        self.violation: str | None = None
        self._policies: dict[tuple[str, int], object] = {}
        self.engine = build_engine(scenario)

    def reset(self) -> None:
        self.engine = build_engine(self.scenario)
        self.revision += 1
        self.verdict = None
        self.violation = None
        self._policies.clear()

    # -- views ---------------------------------------------------------------

    def enabled(self) -> list[dict]:
        if self.verdict:
            return []
        return [{"kind": k, "robot": r} for k, r in self.engine.enabled_events()]

    def state(self) -> dict:
        eng = self.engine
        robots = []
        for r in eng.robots:
            doc = {"id": r.id, "state": r.state, "node": list(r.node) if r.node else None,
                   "edge": [list(r.edge[0]), list(r.edge[1])] if r.edge else None}
            if r.state == "computed":
                dest = r.dest
                if isinstance(dest, tuple) and dest and isinstance(dest[0], tuple):
                    doc["pending"] = [list(d) for d in dest]
                elif dest is not None:
                    doc["pending"] = [list(dest)]
            robots.append(doc)
        still = eng.transit_count == 0
        phase = conds = None
        cands = []
        target_nodes = None
        head = tail = None
        formed = False
        if still and self.verdict in (None, "formed"):
            try:
                a = eng.analysis()
                phase, conds = a.phase_label, a.conds_bits
                formed = a.all_stay
                el = getattr(a, "election", None)
                if el is not None:
                    head, tail = list(el.head), list(el.tail)
                if self.scenario.kind == "grid":
                    cfg = Configuration.from_points(eng.still_nodes())
                    elected = getattr(a, "election", None)
                    for corner, side, bls in candidate_strings(cfg):
                        cands.append({
                            "corner": list(corner),
                            "side": list(side),
                            "bits": bls.bits,
                            "elected": bool(
                                elected and elected.frame.origin == corner
                                and elected.frame.x_dir in (tuple(side), None)
                            ),
                        })
                    if elected is not None:
                        decider = eng.decider
                        target_nodes = []
                        for t in sorted(decider.target.targets):
                            try:
                                target_nodes.append(list(elected.frame.from_frame(t)))
                            except Exception:
                                target_nodes = None
                                break
            except (ElectionError, GuardError, LineError):
                pass
        nodes = [list(r.node) for r in eng.robots if r.node is not None]
        d, m_big, n_big = scenario_bounds(self.scenario)
        mr = compute_metrics(eng.trace, self.scenario, discards=eng.discards)
        return {
            "kind": self.scenario.kind,
            "robots": robots,
            "still": still,
            "phase": phase,
            "conds": conds,
            "formed": formed,
            "verdict": self.verdict,
            "violation": self.violation,
            "candidates": cands,
            "target": [list(t) for t in self.scenario.target],
            "target_nodes": target_nodes,
            "head": head,
            "tail": tail,
            "nodes": nodes,
            "events": eng.t,
            "bounds": {"D": d, "M": m_big, "N": n_big,
                       "space_square_limit": d + 4,
                       "rect_limit": [m_big + 4, n_big + 1]},
            "metrics": {
                "space_square": mr.space_square,
                "space_rect": list(mr.space_rect),
                "moves_total": mr.moves_total,
                "moves_per_role": mr.moves_per_role,
                "discards": mr.discards,
            },
        }

    # -- mutations -----------------------------------------------------------

    def apply(self, event: dict, to=None) -> dict:
        if self.verdict:
            raise ValueError(f"session finished: {self.verdict}")
        ev = (event["kind"], int(event["robot"]))
        if ev not in self.engine.enabled_events():
            raise ValueError(f"event {ev} is not enabled")
        try:
            self.engine.apply_event(ev, tuple(to) if to else None)
        except SimViolation as v:
            self.verdict, self.violation = "violation", v.kind
        except (ElectionError, GuardError, LineError) as e:
            self.verdict, self.violation = "violation", getattr(e, "code", "error")
        self.revision += 1
        if self.verdict is None and not self.engine.enabled_events():
            self.verdict = "formed"
        return self.engine.trace[-1] if self.engine.trace else {}

    def auto_step(self, n: int, policy_name: str, seed: int = 0) -> int:
        key = (policy_name, seed)
        if key not in self._policies:
            self._policies[key] = make_policy(policy_name, seed)
        pol = self._policies[key]
        done = 0
        for _ in range(n):
            if self.verdict:
                break
            enabled = self.engine.enabled_events()
            if not enabled:
                self.verdict = "formed"
                break
            try:
                self.engine.apply_event(pol.next(self.engine, enabled))
            except SimViolation as v:
                self.verdict, self.violation = "violation", v.kind
            except (ElectionError, GuardError, LineError) as e:
                self.verdict, self.violation = "violation", getattr(e, "code", "error")
            self.revision += 1
            done += 1
        return done


_SESSIONS: dict[str, Session] = {}
_SESSIONS_LOCK = threading.Lock()


def _handle(doc: dict) -> dict:
    op = doc.get("op")
    if op == "create-session":
        sc = parse_scenario(json.dumps(doc["scenario"]))
        from .scenario import validate_admissible

        validate_admissible(sc)
        sid = uuid.uuid4().hex[:12]
        s = Session(sc)
        with _SESSIONS_LOCK:
            _SESSIONS[sid] = s
        return {"session": sid, "revision": s.revision, "state": s.state()}

    sid = doc.get("session")
    with _SESSIONS_LOCK:
        s = _SESSIONS.get(sid)
    if s is None:
        raise KeyError(f"unknown session {sid!r}")
    with s.lock:
        if op == "get-state":
            return {"revision": s.revision, "state": s.state()}
        if op == "list-enabled":
            return {"revision": s.revision, "enabled": s.enabled()}
        if op == "apply-event":
            if doc.get("revision") != s.revision:
                raise StaleRevision(s.revision)
            rec = s.apply(doc["event"], doc.get("to"))
            return {"revision": s.revision, "state": s.state(),
                    "record": traceio.record_to_line(rec) if rec else None}
        if op == "auto-step":
            done = s.auto_step(int(doc.get("n", 1)), doc.get("policy", "async-random"),
                               int(doc.get("seed", 0)))
            return {"revision": s.revision, "applied": done, "state": s.state()}
        if op == "reset":
            s.reset()
            return {"revision": s.revision, "state": s.state()}
        if op == "get-trace":
            text = traceio.trace_to_bytes(s.engine.trace).decode("utf-8")
            return {"revision": s.revision, "trace": text, "verdict": s.verdict}
    raise ValueError(f"unknown op {op!r}")


class StaleRevision(Exception):
    def __init__(self, current: int):
        super().__init__(f"stale revision; current is {current}")
        self.current = current


class Handler(BaseHTTPRequestHandler):
    static_dir: str | None = None

    def log_message(self, fmt, *args):  # quiet by default
        pass

    def _send(self, code: int, doc: dict) -> None:
        body = json.dumps(doc).encode("utf-8")
        self.send_response(code)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def do_POST(self):
        if self.path != "/api":
            self._send(404, {"error": "unknown path"})
            return
        try:
            length = int(self.headers.get("Content-Length", 0))
            doc = json.loads(self.rfile.read(length) or b"{}")
            self._send(200, _handle(doc))
        except StaleRevision as e:
            self._send(409, {"error": "stale-revision", "revision": e.current})
        except (KeyError, ValueError, ScenarioError, SimViolation) as e:
            self._send(400, {"error": str(e)})

    def do_GET(self):
        root = self.static_dir
        if root is None:
            self._send(404, {"error": "no static assets configured"})
            return
        rel = self.path.lstrip("/") or "index.html"
        path = os.path.normpath(os.path.join(root, rel))
        if not path.startswith(os.path.abspath(root)) or not os.path.isfile(path):
            self._send(404, {"error": "not found"})
            return
        ctype = {
            ".html": "text/html", ".js": "text/javascript", ".css": "text/css",
            ".json": "application/json", ".map": "application/json",
        }.get(os.path.splitext(path)[1], "application/octet-stream")
        with open(path, "rb") as f:
            body = f.read()
        self.send_response(200)
        self.send_header("Content-Type", ctype)
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)


def make_server(port: int = 7341, static_dir: str | None = None) -> ThreadingHTTPServer:
    handler = type("BoundHandler", (Handler,), {
        "static_dir": os.path.abspath(static_dir) if static_dir else None
    })
    return ThreadingHTTPServer(("127.0.0.1", port), handler)


def serve(port: int = 7341, static_dir: str | None = None) -> None:
    httpd = make_server(port, static_dir)
    print(f"session service on http://127.0.0.1:{httpd.server_address[1]}/ "
          f"(static: {static_dir or 'none'})", flush=True)
    try:
        httpd.serve_forever()
    except KeyboardInterrupt:
        pass
