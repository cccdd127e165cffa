"""Trace-level verification: safety, space and move accounting, phase order.

Every check here is a pure function of a trace (plus its scenario) and can
be re-run offline; recomputing a report twice yields identical results.
Each violation kind falsifies a specific claim:

    collision / swap      collision freedom
    illegal-symmetry      only vertical-axis symmetry with c1, or the formed
                          pattern itself, may ever appear
    guard-violation       exactly one phase guard holds on every still
    digraph-violation     phases only revisit earlier ones via the I<->III
                          and II<->III cycles, never regress after IV
    space-exceeded        the D+4 square / (M+4)x(N+1) rectangle envelope
    moves-exceeded        per-role and total move envelopes (O(k*D) overall)
"""

from __future__ import annotations

from dataclasses import dataclass

from .geometry import (
    Configuration,
    SymmetryClass,
    _class_from_witnesses,
    _effective_witnesses,
    _elect_max,
    _election_from,
    _point_group_witnesses,
    patterns_equivalent,
)
from .grid import GridDecider, Phase
from .line import embed_target_line
from .scenario import Scenario


@dataclass(frozen=True)
class ViolationReport:
    kind: str
    event_index: int | None
    evidence: str


@dataclass(frozen=True)
class MetricsReport:
    D: int
    M: int
    N: int
    space_square: int
    space_rect: tuple[int, int]  # (long side, short side) of visited nodes
    moves_total: int
    moves_by_robot: tuple[int, ...]
    moves_per_role: dict
    phase_sequence: tuple[str, ...]
    discards: int
    events: int


def brute_force_symmetry(config: Configuration) -> SymmetryClass:
    """Exhaustive oracle: try every point-group isometry about the box center.

    Reports the full class, pointwise-fixing axes included; the headline
    ``kind`` counts only isometries that actually permute robots, matching
    what election can observe.
    """
    if not config.cells:
        raise ValueError("empty configuration")
    return _class_from_witnesses(_point_group_witnesses(config.cells), config.nodes)


# ---------------------------------------------------------------------------
# trace replay
# ---------------------------------------------------------------------------


class _Replay:
    """Steps robot positions through a trace, yielding still configurations."""

    def __init__(self, scenario: Scenario):
        self.pos: dict[int, tuple | None] = {i: r for i, r in enumerate(scenario.robots)}
        self.edges: dict[int, tuple] = {}
        self._nodes: frozenset | None = frozenset(self.pos.values())

    def step(self, rec: dict) -> str | None:
        """Apply one record; returns 'depart'/'land'/None."""
        if rec["ev"] != "arrive":
            return None
        self._nodes = None
        rid = rec["robot"]
        if rid in self.edges:
            self.edges.pop(rid)
            self.pos[rid] = rec["to"]
            return "land"
        self.edges[rid] = (rec["from"], rec["to"])
        self.pos[rid] = None
        return "depart"

    @property
    def still(self) -> bool:
        return not self.edges

    def nodes(self) -> frozenset:
        if self._nodes is None:
            self._nodes = frozenset(p for p in self.pos.values() if p is not None)
        return self._nodes


def _dims(points) -> tuple[int, int]:
    """(long, short) side lengths in grid points; 1-dim points get short = 1."""
    pts = [tuple(p) for p in points]
    if len(pts[0]) == 1:
        xs = [p[0] for p in pts]
        return (max(xs) - min(xs) + 1, 1)
    xs = [p[0] for p in pts]
    ys = [p[1] for p in pts]
    w = max(xs) - min(xs) + 1
    h = max(ys) - min(ys) + 1
    return (max(w, h), min(w, h))


def scenario_bounds(scenario: Scenario) -> tuple[int, int, int]:
    """(D, M, N) from the initial and target bounding boxes."""
    m, n = _dims(scenario.robots)
    mp, np_ = _dims(scenario.target)
    return (max(m, n, mp, np_), max(m, mp), max(n, np_))


_HEAD_PHASES = {"II", "VI"}
_TAIL_PHASES = {"I", "III", "V", "VII"}


def compute_metrics(trace: list[dict], scenario: Scenario, discards: int | None = None) -> MetricsReport:
    """Pure accounting over a trace: visited space, per-robot moves, phases.

    Role accounting follows the phase a move was computed in: the head is
    whoever walks in phases II and VI, the tail whoever walks in I, III, V
    and VII, inner robots move only in IV.  Coordinate flips can pass the
    head or tail role between robots mid-run, so per-robot counts against
    the initial election would mix roles.  Line traces have no phases; all
    their moves count per robot and the roles come from the initial
    election.
    """
    d, m_big, n_big = scenario_bounds(scenario)
    k = scenario.k
    visited = set(scenario.robots)
    moves = [0] * k
    inner_moves = [0] * k
    head_total = 0
    tail_total = 0
    phases: list[str] = []
    still_phase: str | None = None
    last_phase: dict[int, str | None] = {}
    rp = _Replay(scenario)
    n_discards = 0
    for rec in trace:
        if rec["ev"] == "activate":
            if rec["phase"] is not None:
                if still_phase is None:
                    still_phase = rec["phase"]
                    phases.append(rec["phase"])
                last_phase[rec["robot"]] = rec["phase"]
            continue
        if rec["ev"] == "discard":
            n_discards += 1
            continue
        kind = rp.step(rec)
        visited.add(rec["from"])
        visited.add(rec["to"])
        if kind == "land":
            rid = rec["robot"]
            moves[rid] += 1
            ph = last_phase.get(rid)
            if ph in _HEAD_PHASES:
                head_total += 1
            elif ph in _TAIL_PHASES:
                tail_total += 1
            else:
                inner_moves[rid] += 1
        still_phase = None
    long_side, short_side = _dims(visited)
    if scenario.kind == "line":
        roles = _roles(scenario)
        head_total = moves[roles["head"]]
        tail_total = moves[roles["tail"]]
        inner_moves = [
            moves[i] for i in range(k) if i not in (roles["head"], roles["tail"])
        ]
    return MetricsReport(
        D=d,
        M=m_big,
        N=n_big,
        space_square=long_side,
        space_rect=(long_side, short_side),
        moves_total=sum(moves),
        moves_by_robot=tuple(moves),
        moves_per_role={
            "head": head_total,
            "tail": tail_total,
            "inner_max": max(inner_moves, default=0),
        },
        phase_sequence=tuple(phases),
        discards=n_discards if discards is None else discards,
        events=trace[-1]["t"] + 1 if trace else 0,
    )


def _roles(scenario: Scenario) -> dict:
    """Robot indices of head and tail as elected on the initial still."""
    if scenario.kind == "grid":
        from .geometry import elect_frame

        el = elect_frame(Configuration.from_points(scenario.robots))
        return {
            "head": scenario.robots.index(el.head),
            "tail": scenario.robots.index(el.tail),
        }
    from .line import LineConfiguration, line_elect

    el = line_elect(LineConfiguration.from_positions(p[0] for p in scenario.robots))
    return {
        "head": scenario.robots.index((el.head,)),
        "tail": scenario.robots.index((el.tail,)),
    }


# ---------------------------------------------------------------------------
# the checks
# ---------------------------------------------------------------------------


def check_space(trace: list[dict], scenario: Scenario,
                metrics: MetricsReport | None = None) -> ViolationReport | None:
    """Every visited node stays in the D+4 square and (M+4)x(N+1) rectangle."""
    mr = metrics or compute_metrics(trace, scenario)
    if scenario.kind == "line":
        if mr.space_square > mr.D:
            return ViolationReport(
                "space-exceeded", None, f"line span {mr.space_square} > D = {mr.D}"
            )
        return None
    if mr.space_square > mr.D + 4:
        return ViolationReport(
            "space-exceeded", None, f"square {mr.space_square} > D+4 = {mr.D + 4}"
        )
    long_side, short_side = mr.space_rect
    if long_side > mr.M + 4 or short_side > mr.N + 1:
        return ViolationReport(
            "space-exceeded",
            None,
            f"rect {mr.space_rect} exceeds ({mr.M + 4}, {mr.N + 1})",
        )
    return None


def check_moves(trace: list[dict], scenario: Scenario,
                metrics: MetricsReport | None = None) -> ViolationReport | None:
    """Per-role and total move envelopes derived from the O(D) per-robot bound."""
    mr = metrics or compute_metrics(trace, scenario)
    d, k = mr.D, scenario.k
    role = mr.moves_per_role
    if role["head"] > d:
        return ViolationReport("moves-exceeded", None, f"head {role['head']} > {d}")
    if role["inner_max"] > 2 * d:
        return ViolationReport("moves-exceeded", None, f"inner {role['inner_max']} > {2 * d}")
    if role["tail"] > 6 * d + 12:
        return ViolationReport("moves-exceeded", None, f"tail {role['tail']} > {6 * d + 12}")
    if mr.moves_total > 2 * k * d + 8 * d + 16:
        return ViolationReport(
            "moves-exceeded", None, f"total {mr.moves_total} > {2 * k * d + 8 * d + 16}"
        )
    return None


_ORDER = {p.value: i for i, p in enumerate(
    (Phase.I, Phase.II, Phase.III, Phase.IV, Phase.V, Phase.VI, Phase.VII, Phase.DONE)
)}
# The tail-walk phases detour through the climb phase when a sideways step
# would land in a configuration an isometry fixes; V -> I is that documented
# escape (the climb's parity fix then returns through I to V).
_BACK_EDGES = {("III", "I"), ("III", "II"), ("V", "I")}


def check_phase_digraph(trace: list[dict], scenario: Scenario | None = None) -> ViolationReport | None:
    """Phase order: forward only, except the documented III->I and III->II."""
    phases = [r["phase"] for r in trace if r["ev"] == "activate" and r["phase"] is not None]
    seq = []
    for p in phases:
        if not seq or seq[-1] != p:
            seq.append(p)
    for a, b in zip(seq, seq[1:]):
        if _ORDER[b] > _ORDER[a]:
            continue
        if (a, b) in _BACK_EDGES:
            continue
        return ViolationReport("digraph-violation", None, f"transition {a} -> {b}")
    return None


def _line_formed(nodes: frozenset, scenario: Scenario) -> bool:
    pos = sorted(p[0] for p in nodes)
    emb = embed_target_line((t[0] for t in scenario.target), scenario.k)
    lo, hi = pos[0], pos[-1]
    fwd = tuple(p - lo for p in pos)
    rev = tuple(sorted(hi - p for p in pos))
    return fwd == emb.targets or rev == emb.targets


def _check_still_symmetry(
    nodes: frozenset, scenario: Scenario, target_cfg, decider, idx: int
) -> ViolationReport | None:
    if scenario.kind == "line":
        pos = sorted(p[0] for p in nodes)
        lo, hi = pos[0], pos[-1]
        fwd = tuple(p - lo for p in pos)
        rev = tuple(sorted(hi - p for p in pos))
        if fwd != rev:
            return None
        if _line_formed(nodes, scenario):
            return None
        return ViolationReport("illegal-symmetry", idx, f"symmetric line still {pos}")
    cells = tuple(sorted((p, 1) for p in nodes))
    witnesses = _effective_witnesses(_point_group_witnesses(cells), nodes)
    if not witnesses:
        return None
    if patterns_equivalent(Configuration.from_points(nodes), target_cfg):
        return None
    names = sorted(w.name for w in witnesses)
    if len(witnesses) != 1 or not names[0].startswith("reflection"):
        return ViolationReport("illegal-symmetry", idx, f"still has symmetries {names}")
    winners = _elect_max(nodes)
    if len(winners) != 2 or winners[0].y_dir != winners[1].y_dir:
        return ViolationReport(
            "illegal-symmetry", idx, f"reflection not vertical in frame: {names}"
        )
    for w in winners:
        el = _election_from(w)
        cv = _conds_under(el, nodes, decider)
        if not cv.c1:
            return ViolationReport(
                "illegal-symmetry", idx, f"symmetric still with c1 false ({cv.as_bits()})"
            )
    return None


def _conds_under(el, nodes, decider):
    from .grid import _eval_conditions_frame

    f = el.frame
    robots_f = frozenset(f.to_frame(p) for p in nodes)
    return _eval_conditions_frame(
        robots_f, f.to_frame(el.head), f.to_frame(el.tail), decider.target
    )


def check_legality(trace: list[dict], scenario: Scenario) -> ViolationReport | None:
    """Replay: no collisions, no edge swaps, only sanctioned symmetry."""
    rp = _Replay(scenario)
    decider = GridDecider(scenario.target) if scenario.kind == "grid" else None
    target_cfg = (
        Configuration.from_points(scenario.target) if scenario.kind == "grid" else None
    )
    v = _check_still_symmetry(rp.nodes(), scenario, target_cfg, decider, -1)
    if v:
        return v
    for i, rec in enumerate(trace):
        if rec["ev"] != "arrive":
            continue
        rid = rec["robot"]
        if rid not in rp.edges:  # depart
            frm, to = rec["from"], rec["to"]
            for oid, (ofrm, oto) in rp.edges.items():
                if (ofrm, oto) == (to, frm):
                    return ViolationReport(
                        "swap", i, f"robots {rid} and {oid} cross edge {frm}-{to}"
                    )
            rp.step(rec)
            continue
        # land
        to = rec["to"]
        for oid, p in rp.pos.items():
            if p == to and oid != rid:
                return ViolationReport("collision", i, f"robots {rid} and {oid} at {to}")
        rp.step(rec)
        if rp.still:
            v = _check_still_symmetry(rp.nodes(), scenario, target_cfg, decider, i)
            if v:
                return v
    return None


def check_guards(trace: list[dict], scenario: Scenario) -> ViolationReport | None:
    """Recompute conditions and phase on every recorded still; must match.

    This re-runs the analysis on replayed positions, so a trace whose
    recorded phases or condition bits disagree with the configuration, or
    whose stills violate guard uniqueness, is caught here.
    """
    if scenario.kind != "grid":
        return None
    decider = GridDecider(scenario.target)
    rp = _Replay(scenario)
    checked: frozenset | None = None
    for i, rec in enumerate(trace):
        if rec["ev"] == "arrive":
            rp.step(rec)
            checked = None
            continue
        if rec["ev"] != "activate" or rec["phase"] is None:
            continue
        nodes = rp.nodes()
        if nodes == checked:
            continue
        checked = nodes
        try:
            a = decider(nodes)
        except Exception as e:  # guard-violation or election failure
            return ViolationReport("guard-violation", i, f"analysis failed: {e}")
        if a.phase_label != rec["phase"] or a.conds_bits != rec["conds"]:
            return ViolationReport(
                "guard-violation",
                i,
                f"recorded {rec['phase']}/{rec['conds']} but recomputed "
                f"{a.phase_label}/{a.conds_bits}",
            )
    return None


def verify_all(trace: list[dict], scenario: Scenario, verdict: str,
               metrics: MetricsReport | None = None) -> list[ViolationReport]:
    """Run every applicable check; space and move envelopes only on formed runs."""
    out = []
    for chk in (check_legality, check_guards):
        v = chk(trace, scenario)
        if v:
            out.append(v)
    v = check_phase_digraph(trace)
    if v:
        out.append(v)
    if verdict == "formed":
        mr = metrics or compute_metrics(trace, scenario)
        for chk in (check_space, check_moves):
            v = chk(trace, scenario, mr)
            if v:
                out.append(v)
    return out
