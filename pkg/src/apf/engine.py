"""Discrete-event execution of look-compute-move cycles.

A robot is idle, computed (holding a pending move), or in transit on an
edge.  The adversary (a scheduler policy) picks which enabled event fires
next:

    activate  an idle robot looks; if any robot is on an edge the snapshot
              is discarded and the robot goes back to sleep (the discard
              still counts as an activation for fairness); otherwise it
              computes on the still snapshot, finishing immediately on Stay
              and holding the move otherwise
    arrive    fired twice per move: the first leaves the node (the robot is
              now visible on the edge), the second lands

Landing on an occupied node or crossing an opposing transit on the same
edge is a violation verdict, never silently ignored.  Runs are
deterministic: (scenario, policy, seed) fixes the trace byte for byte.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable

from .geometry import ElectionError
from .grid import GuardError
from .line import LineError

Node = tuple  # grid node (x, y) or line node (x,)


class SimViolation(Exception):
    def __init__(self, kind: str, detail: str):
        super().__init__(f"{kind}: {detail}")
        self.kind = kind
        self.detail = detail


@dataclass
class RobotProc:
    __slots__ = ("id", "node", "state", "dest", "edge", "last_activation", "pending_since",
                 "activation_count")

    id: int
    node: Node | None
    state: str  # "idle" | "computed" | "transit"
    dest: object  # Node, or a tuple of alternative Nodes, or None
    edge: tuple[Node, Node] | None
    last_activation: int
    pending_since: int
    activation_count: int


@dataclass
class RunResult:
    verdict: str  # "formed" | "violation" | "timeout"
    violation: str | None
    detail: str | None
    trace: list[dict]
    events: int
    final_nodes: tuple[Node, ...]
    discards: int = 0


class Engine:
    """Mutable simulation state plus the event rules.

    ``decider`` maps a still frozenset of nodes to an analysis with a
    ``moves`` dict (node -> (decision, destination)), ``all_stay``,
    ``phase_label`` and ``conds_bits``.  The algorithm layer never sees
    robot ids or in-transit robots.
    """

    def __init__(
        self,
        start_nodes,
        decider: Callable,
        *,
        seed: int = 0,
        fairness_window: int | None = None,
        max_events: int | None = None,
    ):
        nodes = [tuple(n) for n in start_nodes]
        if len(set(nodes)) != len(nodes):
            raise SimViolation("collision", "duplicate start nodes")
        self.robots = [
            RobotProc(i, n, "idle", None, None, -1, -1, 0) for i, n in enumerate(nodes)
        ]
        self.decider = decider
        self.k = len(nodes)
        self.t = 0
        self.transit_count = 0
        self.trace: list[dict] = []
        self.last_change_t = 0
        self.discards = 0
        self.fairness_window = fairness_window or 8 * self.k
        self.max_events = max_events
        self._hrng = random.Random(f"{seed}:any-horizontal")
        self._analysis = None
        self._still_version = -1
        self._version = 0  # bumped whenever node occupancy changes
        self.pending = 0  # robots computed or in transit

    # -- state inspection ---------------------------------------------------

    def still_nodes(self) -> frozenset:
        return frozenset(r.node for r in self.robots)

    def analysis(self):
        """Analysis of the current still configuration (cached per version)."""
        if self.transit_count:
            raise SimViolation("not-still", "analysis requested mid-transit")
        if self._still_version != self._version:
            self._analysis = self.decider(self.still_nodes())
            self._still_version = self._version
        return self._analysis

    def enabled_events(self) -> list[tuple[str, int]]:
        """Enabled events, sorted; empty exactly at termination."""
        if not self.pending and self._terminal(self.analysis()):
            return []
        out = []
        for r in self.robots:
            out.append(("activate" if r.state == "idle" else "arrive", r.id))
        return out

    @staticmethod
    def _terminal(a) -> bool:
        if not a.all_stay:
            return False
        if a.phase_label not in (None, "done"):
            # A live configuration where no rule fires is a stall, never a
            # finished pattern.
            raise SimViolation(
                "guard-violation", f"no move prescribed in phase {a.phase_label}"
            )
        return True

    # -- event application --------------------------------------------------

    def _record(self, ev: str, robot: int, frm, to, phase=None, conds=None) -> None:
        self.trace.append(
            {"t": self.t, "ev": ev, "robot": robot, "from": frm, "to": to,
             "phase": phase, "conds": conds}
        )

    def apply_event(self, event: tuple[str, int], any_dest: Node | None = None) -> None:
        kind, rid = event
        r = self.robots[rid]
        if kind == "activate":
            if r.state != "idle":
                raise SimViolation("not-enabled", f"activate on {r.state} robot {rid}")
            r.last_activation = self.t
            r.activation_count += 1
            if self.transit_count:
                self.discards += 1
                self._record("discard", rid, None, None)
                self.t += 1
                return
            a = self.analysis()
            mv, dest = a.moves[r.node]
            self._record("activate", rid, None, None, a.phase_label, a.conds_bits)
            self.t += 1
            if dest is not None:
                r.state = "computed"
                r.dest = dest
                r.pending_since = self.t
                self.pending += 1
            return
        if kind != "arrive":
            raise SimViolation("not-enabled", f"unknown event {kind}")
        if r.state == "computed":
            dest = r.dest
            if isinstance(dest, tuple) and dest and isinstance(dest[0], tuple):
                # unresolved horizontal: the adversary or the seed picks a side
                if any_dest is not None:
                    if tuple(any_dest) not in dest:
                        raise SimViolation("not-enabled", f"{any_dest} not an alternative")
                    dest = tuple(any_dest)
                else:
                    dest = self._hrng.choice(sorted(dest))
            frm = r.node
            for o in self.robots:
                if o.state == "transit" and o.edge == (dest, frm):
                    self._record("arrive", rid, frm, dest)
                    raise SimViolation("swap", f"robots {rid} and {o.id} cross edge {frm}-{dest}")
            r.state = "transit"
            r.edge = (frm, dest)
            r.node = None
            r.dest = None
            self.transit_count += 1
            self._version += 1
            self._record("arrive", rid, frm, dest)
            self.t += 1
            self.last_change_t = self.t
            return
        if r.state == "transit":
            frm, to = r.edge
            for o in self.robots:
                if o.node == to:
                    self._record("arrive", rid, frm, to)
                    raise SimViolation("collision", f"robots {rid} and {o.id} share node {to}")
            r.node = to
            r.state = "idle"
            r.edge = None
            self.transit_count -= 1
            self.pending -= 1
            self._version += 1
            self._record("arrive", rid, frm, to)
            self.t += 1
            self.last_change_t = self.t
            return
        raise SimViolation("not-enabled", f"arrive on idle robot {rid}")

    # -- the run loop ---------------------------------------------------------

    def run(self, policy) -> RunResult:
        limit = self.max_events if self.max_events is not None else 10**9
        try:
            while self.t < limit:
                if not self.pending and self._terminal(self.analysis()):
                    return self._result("formed", None, None)
                self.apply_event(policy.next(self))
            return self._result("timeout", None, f"event limit {limit}")
        except SimViolation as v:
            return self._result("violation", v.kind, v.detail)
        except (ElectionError, LineError) as e:
            return self._result("violation", "illegal-symmetry", str(e))
        except GuardError as e:
            return self._result("violation", "guard-violation", str(e))

    def _result(self, verdict, violation, detail) -> RunResult:
        final = tuple(sorted(r.node for r in self.robots if r.node is not None))
        return RunResult(verdict, violation, detail, self.trace, self.t, final, self.discards)


def default_event_limit(k: int, d: int) -> int:
    return 64 * k * (d + 4) ** 2
