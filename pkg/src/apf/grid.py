"""The seven-phase pattern formation algorithm on the infinite grid.

Everything here is a pure function of a still snapshot and the raw target
pattern.  A snapshot analysis elects the coordinate frame, embeds the target,
evaluates the condition vector c0..c10, infers the unique active phase, and
produces the move (if any) for every robot position.  All reasoning happens
in frame coordinates; only the final destinations are translated back to
absolute nodes.

Condition vector, with H_t / V_t the horizontal / vertical line through the
tail and all sets compared in frame coordinates:

    c0  configuration equals the embedded target
    c1  configuration minus tail equals target minus tail-target
    c2  configuration minus head and tail equals target minus its ends
    c3  tail shares its column with the tail-target
    c4  nothing but the tail (robot or target) on or above H_t
    c5  the tail's row is an odd count of grid points up from row one
    c6  bounding rectangle is not a square
    c7  nothing but the tail (robot or target) on or right of V_t
    c8  head sits on the origin
    c9  relocating tail -> far corner, head -> origin stays asymmetric,
        both as the robots stand and with them on their future slots
    c10 configuration minus tail has a robot-swapping mirror about a
        vertical grid column

c5's parity is load-bearing twice over.  An odd height means the top row is
scanned anchor-side-first by every corner string, so a tail sliding along
the top row toward the far corner strictly grows the elected string and the
frame cannot flip out from under it mid-phase.  It is also exactly the
parity that makes the full serpentine over the box end on the tail's
corner, which phase IV's path relies on.
"""

from __future__ import annotations

import bisect
import enum
import functools
from dataclasses import dataclass

from .geometry import (
    BoundingRect,
    Configuration,
    Election,
    ElectionError,
    GeometryError,
    Point,
    _candidates,
    _effective_witnesses,
    _elect_max,
    _election_from,
    _point_group_witnesses,
)


class GuardError(ValueError):
    def __init__(self, code: str, message: str | None = None):
        super().__init__(message or code)
        self.code = code


class PathError(ValueError):
    def __init__(self, code: str, message: str | None = None):
        super().__init__(message or code)
        self.code = code


class MoveDecision(enum.Enum):
    """One-step move in frame coordinates.

    ANY_HORIZONTAL marks the two cases the frame cannot name a single
    destination for: a horizontal step while the x axis is undefined
    (collinear configuration), and a step under a tied diagonal reading.
    The scheduler resolves which of the two mirrored nodes it lands on.
    """

    STAY = "stay"
    UP = "up"
    DOWN = "down"
    LEFT = "left"
    RIGHT = "right"
    ANY_HORIZONTAL = "any-horizontal"


_DELTA = {
    MoveDecision.UP: (0, 1),
    MoveDecision.DOWN: (0, -1),
    MoveDecision.LEFT: (-1, 0),
    MoveDecision.RIGHT: (1, 0),
}


class Phase(enum.Enum):
    I = "I"
    II = "II"
    III = "III"
    IV = "IV"
    V = "V"
    VI = "VI"
    VII = "VII"
    DONE = "done"


@dataclass(frozen=True)
class EmbeddedTarget:
    """Target pattern in canonical frame coordinates.

    Normalized by the target's own largest corner string; ties (symmetric
    targets) all produce the same set.  ``ordering`` lists the targets in
    serpentine order (row by row, even rows left to right), which is their
    order along the phase-IV path independent of that path's width.
    """

    targets: frozenset[Point]
    h_target: Point
    t_target: Point
    ordering: tuple[Point, ...]

    @property
    def k(self) -> int:
        return len(self.targets)


@dataclass(frozen=True)
class ConditionVector:
    c0: bool
    c1: bool
    c2: bool
    c3: bool
    c4: bool
    c5: bool
    c6: bool
    c7: bool
    c8: bool
    c9: bool
    c10: bool

    def as_bits(self) -> str:
        return "".join(
            "1" if v else "0"
            for v in (self.c0, self.c1, self.c2, self.c3, self.c4, self.c5,
                      self.c6, self.c7, self.c8, self.c9, self.c10)
        )


@dataclass(frozen=True)
class SnakePath:
    """The head-to-tail path used by the phase-IV rearrangement.

    Serpentine over every full row below the tail's row, then one upward
    edge to the tail.
    """

    nodes: tuple[Point, ...]

    def rank_of(self, p: Point) -> int:
        return self._ranks()[p]

    def _ranks(self) -> dict[Point, int]:
        if not hasattr(self, "_rank_cache"):
            object.__setattr__(self, "_rank_cache", {p: i for i, p in enumerate(self.nodes)})
        return self._rank_cache


@dataclass(frozen=True)
class PhaseVRefs:
    """Reference points for the phase-V tail slide, on the tail's row H_t.

    ``t_prime`` is H_t at the tail-target's column, ``c_dprime`` H_t at the
    right side of the headless configuration's bounding box.  ``e_x2`` is the
    doubled x of H_t's intersection with the headless configuration's
    vertical symmetry axis (None without that symmetry; doubled because the
    axis may run between columns).  When ``safe`` the tail may step toward
    ``t_prime``; otherwise it must step left.
    """

    t_prime: Point
    c_dprime: Point
    e_x2: int | None
    safe: bool


class StillAnalysis:
    """Everything the simulator needs to know about one still snapshot.

    ``moves`` maps each absolute robot node to its frame decision and
    destination: an absolute node, a pair of adversary-resolvable
    alternatives, or None for a stay.
    """

    __slots__ = ("election", "conds", "phase", "moves", "all_stay", "tied",
                 "phase_label", "conds_bits")

    def __init__(self, election: Election, conds: ConditionVector, phase: Phase,
                 moves: dict[Point, tuple[MoveDecision, object]],
                 all_stay: bool, tied: bool):
        self.election = election
        self.conds = conds
        self.phase = phase
        self.moves = moves
        self.all_stay = all_stay
        self.tied = tied
        self.phase_label = phase.value
        self.conds_bits = conds.as_bits()


# ---------------------------------------------------------------------------
# target embedding
# ---------------------------------------------------------------------------


def serpentine_sorted(points) -> tuple[Point, ...]:
    """Row-major order with odd rows reversed: the path order of phase IV."""
    return tuple(sorted(points, key=lambda p: (p[1], p[0] if p[1] % 2 == 0 else -p[0])))


def embed_target_grid(frame, raw_target) -> EmbeddedTarget:
    """Canonical frame-coordinate form of a raw target pattern.

    The target is normalized by the anchor of its own lexicographically
    largest corner string; for symmetric targets any tied anchor yields the
    same set.  A collinear target comes out along the +y axis.  ``frame`` is
    accepted for signature symmetry with the condition evaluator; the
    canonical form does not depend on it.
    """
    pts = [(int(p[0]), int(p[1])) for p in raw_target]
    nodes = frozenset(pts)
    if len(nodes) != len(pts):
        raise GeometryError("target-multiplicity", "target positions must be distinct")
    winner = _elect_max(nodes)[0]
    raw = winner.raw
    canonical = frozenset(winner.frame_at(i) for i in range(len(raw)) if raw[i])
    h = winner.frame_at(raw.find(b"\x01"))
    t = winner.frame_at(raw.rfind(b"\x01"))
    return EmbeddedTarget(canonical, h, t, serpentine_sorted(canonical))


# ---------------------------------------------------------------------------
# conditions and phase guards
# ---------------------------------------------------------------------------


@functools.lru_cache(maxsize=4096)
def _pinned_slots_cached(inner_slots: frozenset, w: int, h: int) -> bool:
    pinned: dict[Point, int] = {}
    for p in inner_slots:
        pinned[p] = pinned.get(p, 0) + 1
    for p in ((0, 0), (w - 1, h - 1)):
        pinned[p] = pinned.get(p, 0) + 1
    ws = _point_group_witnesses(tuple(sorted(pinned.items())))
    return not _effective_witnesses(ws, pinned.keys())


def _landing_blocked(rest: frozenset, landing: Point) -> bool:
    """Would stepping onto ``landing`` produce a configuration fixed by a
    robot-permuting isometry other than a vertical mirror?  Vertical-mirror
    stills are the sanctioned kind (the tied frames agree on the decision and
    the far target sits on the axis); everything else would deadlock the
    election."""
    s = rest | {landing}
    cells = tuple(sorted((p, 1) for p in s))
    for wit in _effective_witnesses(_point_group_witnesses(cells), s):
        if wit.name != "reflection-vertical":
            return True
    return False


def _pinned_slots_asymmetric(target: EmbeddedTarget, h: int) -> bool:
    """Would the completed rearrangement in a box of height ``h`` be fixed by
    an isometry?  The box width is where the sideways walk will park the
    tail: one column past the widest target."""
    inner = target.targets - {target.h_target, target.t_target}
    w_end = max(p[0] for p in target.targets) + 2
    return _pinned_slots_cached(inner, w_end, h)


def _eval_conditions_frame(
    robots_f: frozenset[Point],
    head_f: Point,
    tail_f: Point,
    target: EmbeddedTarget,
) -> ConditionVector:
    t_set = target.targets
    h_t, t_t = target.h_target, target.t_target
    w = h = 0
    for p in robots_f:
        if p[0] >= w:
            w = p[0] + 1
        if p[1] >= h:
            h = p[1] + 1
    others = robots_f - {tail_f}

    c0 = robots_f == t_set
    c1 = others == t_set - {t_t}
    c2 = (robots_f - {head_f, tail_f}) == t_set - {h_t, t_t}
    tx, ty = tail_f
    c3 = tx == t_t[0]
    c4 = all(p[1] < ty for p in others) and all(p[1] < ty for p in t_set)
    c5 = ty % 2 == 0  # tail row spans an odd number of grid points from row 1
    c6 = w != h
    c7 = all(p[0] < tx for p in others) and all(p[0] < tx for p in t_set)
    c8 = head_f == (0, 0)
    # c9: hypothetically pin tail and head to the far corner and the origin.
    # Checked both with the inner robots where they stand and with them on
    # their future slots; a box whose completed rearrangement some isometry
    # would fix must not be parked in.  Only robot-permuting isometries
    # count.
    hyp: dict[Point, int] = {}
    for p in robots_f - {head_f, tail_f}:
        hyp[p] = hyp.get(p, 0) + 1
    for p in ((0, 0), (w - 1, h - 1)):
        hyp[p] = hyp.get(p, 0) + 1
    hyp_w = _point_group_witnesses(tuple(sorted(hyp.items())))
    c9 = not _effective_witnesses(hyp_w, hyp.keys())
    if c9:
        c9 = _pinned_slots_asymmetric(target, h)
    # c10: a vertical-axis reflection of the tailless set that swaps robots
    # about a grid column.  A single occupied column is fixed pointwise and
    # does not count, and an axis running between two columns cannot ever
    # carry the tail, so no symmetric configuration can arise from it either.
    lo = hi = next(iter(others))[0]
    for p in others:
        x = p[0]
        if x < lo:
            lo = x
        elif x > hi:
            hi = x
    a2 = lo + hi
    c10 = (
        lo != hi
        and a2 % 2 == 0
        and all((a2 - x, y) in others for (x, y) in others)
    )
    return ConditionVector(c0, c1, c2, c3, c4, c5, c6, c7, c8, c9, c10)


def eval_conditions(
    config: Configuration, election: Election, target: EmbeddedTarget
) -> ConditionVector:
    """Evaluate c0..c10 for a still configuration under an elected frame."""
    f = election.frame
    robots_f = frozenset(f.to_frame(p) for p in config.nodes)
    return _eval_conditions_frame(
        robots_f, f.to_frame(election.head), f.to_frame(election.tail), target
    )


def infer_phase(cv: ConditionVector) -> Phase:
    """The unique phase whose guard is satisfied (Done when c0).

    Zero or several true guards cannot happen on configurations the
    algorithm reaches; seeing ``guard-violation`` there is a harness-level
    failure, not a recoverable state.
    """
    if cv.c0:
        return Phase.DONE
    g = cv.c4 and cv.c5 and cv.c6
    guards = [
        (Phase.I, not g and not (cv.c1 and cv.c3)),
        (Phase.II, g and not cv.c8 and ((cv.c2 and not cv.c3) or not cv.c2)),
        (Phase.III, g and cv.c8 and not cv.c2 and not cv.c7),
        (Phase.IV, g and cv.c7 and cv.c8 and not cv.c2),
        (Phase.V, cv.c2 and g and cv.c8 and not cv.c3),
        (Phase.VI, not cv.c1 and cv.c2 and cv.c3 and g),
        (Phase.VII, not cv.c0 and cv.c1 and cv.c3),
    ]
    active = [p for p, on in guards if on]
    if len(active) != 1:
        raise GuardError(
            "guard-violation",
            f"conds {cv.as_bits()} satisfy {[p.value for p in active]}",
        )
    return active[0]


# ---------------------------------------------------------------------------
# phase IV: the snake path and the rearrangement rules
# ---------------------------------------------------------------------------


def build_snake_path(ser: BoundingRect, tail: Point) -> SnakePath:
    """Path from the origin corner to the tail corner.

    The full serpentine over the box: row 0 rightward, alternating, which
    lands on the far corner exactly because the tail's row index is even
    (the box height is odd, the c5 parity).
    """
    w = ser.width
    y_t = tail[1] - ser.min_y
    if tail != (ser.max_x, ser.max_y):
        raise PathError("c5-violated", f"tail {tail} is not the far corner of {ser}")
    if y_t % 2 == 1 or w == 1:
        raise PathError("c5-violated", f"box height {y_t + 1} even or degenerate width {w}")
    nodes: list[Point] = []
    for y in range(y_t + 1):
        xs = range(w) if y % 2 == 0 else range(w - 1, -1, -1)
        nodes.extend((ser.min_x + x, ser.min_y + y) for x in xs)
    return SnakePath(tuple(nodes))


def _rank(p: Point, w: int) -> int:
    x, y = p
    return y * w + (x if y % 2 == 0 else w - 1 - x)


def _node_at(rank: int, w: int) -> Point:
    y, p = divmod(rank, w)
    return (p if y % 2 == 0 else w - 1 - p, y)


def _rearrange_moves(
    robots_f: frozenset[Point],
    target: EmbeddedTarget,
    w: int,
    tail_f: Point,
) -> dict[Point, MoveDecision]:
    """Frame-coordinate moves for every inner robot under the path rules.

    Left moves (toward the head in path order) have global priority; a robot
    moves only when the stretch of path between it and its target is free of
    other robots.  Straight-line shortcuts and row hops follow the published
    branch order exactly.
    """
    order = sorted(_rank(p, w) for p in robots_f)
    robots_by_rank = [_node_at(r, w) for r in order]
    k = len(order)
    t_ranks = [_rank(t, w) for t in target.ordering]

    needs_left = any(t_ranks[i] < order[i] for i in range(1, k - 1))

    def blocked(lo: int, hi: int) -> bool:  # any robot with rank in [lo, hi]
        i = bisect.bisect_left(order, lo)
        return i < k and order[i] <= hi

    def guarded(r: Point, mv: MoveDecision, fallback_rank: int) -> MoveDecision | None:
        """Swap a shortcut for the plain path step if it would land in a
        configuration some isometry fixes (election would tie there); both
        advance the same way along the path.  None drops the mover."""
        dx, dy = _DELTA[mv]
        landing = (r[0] + dx, r[1] + dy)
        rest = robots_f - {r}
        if not _landing_blocked(rest, landing):
            return mv
        alt = _node_at(fallback_rank, w)
        if alt != landing and not _landing_blocked(rest, alt):
            return _step_to(r, alt)
        return None

    out: dict[Point, MoveDecision] = {}
    for i in range(1, k - 1):
        rp = order[i]
        r = robots_by_rank[i]
        t = target.ordering[i]
        tp = t_ranks[i]
        if tp < rp:
            if blocked(tp, rp - 1):
                continue
            if r[0] == t[0]:
                mv = MoveDecision.DOWN
            elif r[1] == t[1]:
                mv = MoveDecision.LEFT if t[0] < r[0] else MoveDecision.RIGHT
            else:
                below_rank = _rank((r[0], r[1] - 1), w)
                if below_rank > tp:
                    mv = MoveDecision.DOWN
                else:
                    mv = _step_to(r, _node_at(rp - 1, w))
            mv = guarded(r, mv, rp - 1)
            if mv is not None:
                out[r] = mv
        elif tp > rp and not needs_left:
            if blocked(rp + 1, tp):
                continue
            if r[0] == t[0]:
                mv = MoveDecision.UP
            elif r[1] == t[1]:
                mv = MoveDecision.LEFT if t[0] < r[0] else MoveDecision.RIGHT
            else:
                above_rank = _rank((r[0], r[1] + 1), w)
                if above_rank < tp:
                    mv = MoveDecision.UP
                else:
                    mv = _step_to(r, _node_at(rp + 1, w))
            mv = guarded(r, mv, rp + 1)
            if mv is not None:
                out[r] = mv
    return out


def _step_to(src: Point, dst: Point) -> MoveDecision:
    delta = (dst[0] - src[0], dst[1] - src[1])
    for mv, d in _DELTA.items():
        if d == delta:
            return mv
    raise PathError("c5-violated", f"non-adjacent path step {src} -> {dst}")


def rearrange_decide(
    self_pos: Point,
    snapshot: frozenset[Point],
    target: EmbeddedTarget,
    path: SnakePath,
) -> MoveDecision:
    """Phase-IV decision for one inner robot, all in frame coordinates."""
    if self_pos not in snapshot:
        raise PathError("not-inner", f"{self_pos} is not occupied")
    tail_f = path.nodes[-1]
    w = sum(1 for p in path.nodes if p[1] == path.nodes[0][1])
    if self_pos == path.nodes[0] or self_pos == tail_f:
        raise PathError("not-inner", f"{self_pos} is the head or the tail")
    return _rearrange_moves(snapshot, target, w, tail_f).get(self_pos, MoveDecision.STAY)


# ---------------------------------------------------------------------------
# phase V reference points
# ---------------------------------------------------------------------------


def _phase5_refs(
    robots_f: frozenset[Point], tail_f: Point, target: EmbeddedTarget, c10: bool
) -> PhaseVRefs:
    others = robots_f - {tail_f}
    xs = [p[0] for p in others]
    hi = max(xs)
    y_t = tail_f[1]
    t_prime = (target.t_target[0], y_t)
    c_dprime = (hi, y_t)
    if not c10:
        return PhaseVRefs(t_prime, c_dprime, None, True)
    e_x2 = min(xs) + max(xs)  # doubled x of the symmetry axis on H_t
    both_right = tail_f[0] > hi and t_prime[0] > hi
    both_on_de = 2 * tail_f[0] <= e_x2 and 2 * t_prime[0] <= e_x2
    return PhaseVRefs(t_prime, c_dprime, e_x2, both_right or both_on_de)


def phase5_reference_points(
    config: Configuration, election: Election, target: EmbeddedTarget
) -> PhaseVRefs:
    """T', C'' and E for the phase-V tail slide, in frame coordinates."""
    f = election.frame
    robots_f = frozenset(f.to_frame(p) for p in config.nodes)
    tail_f = f.to_frame(election.tail)
    cv = _eval_conditions_frame(robots_f, f.to_frame(election.head), tail_f, target)
    return _phase5_refs(robots_f, tail_f, target, cv.c10)


# ---------------------------------------------------------------------------
# the per-snapshot decision
# ---------------------------------------------------------------------------


def _phase_movers(
    phase: Phase,
    cv: ConditionVector,
    robots_f: frozenset[Point],
    head_f: Point,
    tail_f: Point,
    target: EmbeddedTarget,
) -> dict[Point, MoveDecision]:
    if phase is Phase.DONE:
        return {}
    if phase is Phase.I:
        return {tail_f: MoveDecision.UP}
    if phase is Phase.II:
        return {head_f: MoveDecision.LEFT}
    if phase is Phase.III:
        w = 1 + max(p[0] for p in robots_f)
        h = 1 + max(p[1] for p in robots_f)
        if cv.c10:
            # The mirror axis of the rest is impassable for the tail (any
            # tail position on it is a symmetric configuration), so the walk
            # always heads away from it: leftward out of the box from the
            # near side, rightward past everything from the far side.
            others = robots_f - {tail_f}
            xs = [p[0] for p in others]
            a2 = min(xs) + max(xs)
            away = MoveDecision.LEFT if 2 * tail_f[0] < a2 else MoveDecision.RIGHT
            mv = away if h > w + 1 else MoveDecision.UP
        elif not cv.c9:
            mv = MoveDecision.UP
        else:
            mv = MoveDecision.RIGHT if h > w + 1 else MoveDecision.UP
        if mv in (MoveDecision.LEFT, MoveDecision.RIGHT):
            # A sideways step may land on the half-turn image of the rest,
            # where election would tie; one step up first breaks the
            # coincidence, the same remedy the corner-pinning condition uses.
            dx = -1 if mv is MoveDecision.LEFT else 1
            if _landing_blocked(robots_f - {tail_f}, (tail_f[0] + dx, tail_f[1])):
                mv = MoveDecision.UP
        return {tail_f: mv}
    if phase is Phase.IV:
        w = 1 + max(p[0] for p in robots_f)
        return _rearrange_moves(robots_f, target, w, tail_f)
    if phase is Phase.V:
        refs = _phase5_refs(robots_f, tail_f, target, cv.c10)
        if refs.safe:
            mv = MoveDecision.LEFT if refs.t_prime[0] < tail_f[0] else MoveDecision.RIGHT
        else:
            mv = MoveDecision.LEFT
        # The slide may pass the exact half-turn image of the rest, where
        # election would tie; two rows up (this step plus the parity fix the
        # next still demands) shift the box center and clear the alignment.
        dx = -1 if mv is MoveDecision.LEFT else 1
        if _landing_blocked(robots_f - {tail_f}, (tail_f[0] + dx, tail_f[1])):
            mv = MoveDecision.UP
        return {tail_f: mv}
    if phase is Phase.VI:
        mv = MoveDecision.LEFT if target.h_target[0] < head_f[0] else MoveDecision.RIGHT
        return {head_f: mv}
    if phase is Phase.VII:
        mv = MoveDecision.UP if target.t_target[1] > tail_f[1] else MoveDecision.DOWN
        return {tail_f: mv}
    raise GuardError("guard-violation", f"no move rule for {phase}")


class _FrameView:
    """One frame's reading of a still: conditions and phase, moves on demand."""

    __slots__ = ("election", "to_abs", "robots_f", "head_f", "tail_f", "cv", "phase")

    def __init__(self, nodes: frozenset[Point], election: Election,
                 target: EmbeddedTarget):
        f = election.frame
        ox, oy = f.origin
        yx, yy = f.y_dir
        xd = f.x_dir
        to_abs: dict[Point, Point] = {}
        if xd is None:
            for p in nodes:
                dx, dy = p[0] - ox, p[1] - oy
                to_abs[(0, dx * yx + dy * yy)] = p
        else:
            xx, xy = xd
            for p in nodes:
                dx, dy = p[0] - ox, p[1] - oy
                to_abs[(dx * xx + dy * xy, dx * yx + dy * yy)] = p
        self.election = election
        self.to_abs = to_abs
        self.robots_f = frozenset(to_abs)
        self.head_f = f.to_frame(election.head)
        self.tail_f = f.to_frame(election.tail)
        self.cv = _eval_conditions_frame(self.robots_f, self.head_f, self.tail_f, target)
        self.phase = infer_phase(self.cv)

    def moves(self, target: EmbeddedTarget) -> dict[Point, tuple[MoveDecision, object]]:
        f = self.election.frame
        movers = _phase_movers(
            self.phase, self.cv, self.robots_f, self.head_f, self.tail_f, target
        )
        moves: dict[Point, tuple[MoveDecision, object]] = {}
        for fp, ap in self.to_abs.items():
            mv = movers.get(fp)
            if mv is None:
                moves[ap] = (MoveDecision.STAY, None)
                continue
            dx, dy = _DELTA[mv]
            if f.x_dir is None and dx != 0:
                yx, yy = f.y_dir
                side = (yy, -yx)  # either perpendicular; the scheduler picks
                a = (ap[0] + side[0], ap[1] + side[1])
                b = (ap[0] - side[0], ap[1] - side[1])
                moves[ap] = (MoveDecision.ANY_HORIZONTAL, (a, b))
            else:
                moves[ap] = (mv, f.from_frame((fp[0] + dx, fp[1] + dy)))
        return moves


def _frame_analysis(
    nodes: frozenset[Point], election: Election, target: EmbeddedTarget
) -> tuple[ConditionVector, Phase, dict[Point, tuple[MoveDecision, object]]]:
    view = _FrameView(nodes, election, target)
    return view.cv, view.phase, view.moves(target)


def _moves_agree(a: dict, b: dict) -> bool:
    if a.keys() != b.keys():
        return False
    for p, (mva, da) in a.items():
        mvb, db = b[p]
        stay_a, stay_b = mva is MoveDecision.STAY, mvb is MoveDecision.STAY
        if stay_a != stay_b:
            return False
        if stay_a:
            continue
        da_set = set(da) if isinstance(da, tuple) and isinstance(da[0], tuple) else {da}
        db_set = set(db) if isinstance(db, tuple) and isinstance(db[0], tuple) else {db}
        if da_set != db_set:
            return False
    return True


def _pairing_cost(robots_f: frozenset[Point], target: EmbeddedTarget, w: int) -> int:
    """Total path-rank distance from inner robots to their paired targets."""
    w1 = w - 1
    order = sorted(
        y * w + (x if y % 2 == 0 else w1 - x) for x, y in robots_f
    )
    total = 0
    ordering = target.ordering
    for i in range(1, len(order) - 1):
        x, y = ordering[i]
        total += abs(order[i] - (y * w + (x if y % 2 == 0 else w1 - x)))
    return total


_PHASE_RANK = {
    Phase.I: 0, Phase.II: 1, Phase.III: 2, Phase.IV: 3,
    Phase.V: 4, Phase.VI: 5, Phase.VII: 6, Phase.DONE: 7,
}

_DISTANCE_PHASES = {Phase.III, Phase.IV, Phase.V, Phase.VI, Phase.VII}


def _remaining_distance(
    phase: Phase,
    robots_f: frozenset[Point],
    head_f: Point,
    tail_f: Point,
    target: EmbeddedTarget,
    cv: ConditionVector,
) -> int:
    """Moves left in the current phase under this frame; 0 where unused.

    This is the tie-break that keeps a frame committed: among frames reading
    the same phase the one closest to finishing it wins, and every move
    under the adopted frame strictly shrinks its own figure while a rival's
    can change by at most as much, so the adopted reading cannot seesaw.
    """
    if phase is Phase.IV:
        w = 1 + max(p[0] for p in robots_f)
        return _pairing_cost(robots_f, target, w)
    if phase is Phase.V:
        return abs(tail_f[0] - target.t_target[0])
    if phase is Phase.VI:
        return abs(head_f[0] - target.h_target[0])
    if phase is Phase.VII:
        return abs(tail_f[1] - target.t_target[1])
    if phase is Phase.III:
        # Work left in the walk; ties between the two corner readings of a
        # walk otherwise seesaw the direction under the mover.  With the
        # rest mirrored the tail exits away from the axis: leftward out of
        # the box from the near side, rightward past everything otherwise.
        if cv.c10:
            others = [p[0] for p in robots_f if p != tail_f]
            a2 = min(others) + max(others)
            if 2 * tail_f[0] < a2:
                return tail_f[0] + 1
        edge = max(
            max((p[0] for p in robots_f if p != tail_f), default=0),
            max(p[0] for p in target.targets),
        )
        return max(edge + 1 - tail_f[0], 0)
    return 0


def _quick_late(cand, nodes: frozenset[Point], target: EmbeddedTarget) -> bool:
    """Cheap screen: could this frame read phase IV or later (c1 or c2)?"""
    first = cand.raw.find(b"\x01")
    last = cand.raw.rfind(b"\x01")
    head = cand.point_at(first)
    tail = cand.point_at(last)
    ox, oy = cand.origin
    yx, yy = cand.y_dir
    if cand.x_dir is None:
        to_f = lambda p: (0, (p[0] - ox) * yx + (p[1] - oy) * yy)
    else:
        xx, xy = cand.x_dir

        def to_f(p):
            dx, dy = p[0] - ox, p[1] - oy
            return (dx * xx + dy * xy, dx * yx + dy * yy)

    robots_f = frozenset(to_f(p) for p in nodes)
    t = target.targets
    if robots_f - {to_f(tail)} == t - {target.t_target}:
        return True
    return robots_f - {to_f(head), to_f(tail)} == t - {target.h_target, target.t_target}


def analyze_still(nodes: frozenset[Point], target: EmbeddedTarget) -> StillAnalysis:
    """Full analysis of a still snapshot: frame, conditions, phase, moves.

    The baseline election takes the unique largest corner string.  Raw
    string order alone is not stable enough to carry a whole run: while the
    two far corners of the box are both occupied (the rearrangement phase
    and the first tail slide), or while no corner is occupied (the head's
    final walk), the maximum can seesaw between anchors as robots move,
    which would flip the goal placement under the movers and livelock.  The
    adopted frame is therefore chosen by progress: every anchor whose
    reading could be in phase IV or later is evaluated, and the frame with
    the latest phase wins, ties going to the frame with the least work left
    in that phase and then to string order.  The least-work figure strictly
    decreases under the moves it prescribes, so the adopted reading cannot
    cycle; whichever anchor wins forms the same pattern up to isometry.

    Tied maxima witness a symmetry and are tolerated exactly when the tie
    cannot matter: every tied frame must prescribe the same absolute action
    (a completed symmetric pattern, or the final-phase vertical tie whose
    readings provably coincide).  A configuration lying on one corner's
    diagonal additionally has two transposed readings with no shared
    chirality to order them; each mirrored step there is left to the
    scheduler.  Any other disagreement is a hard error.
    """
    cands = _candidates(nodes)
    best_raw = max(c.raw for c in cands)
    winners = [c for c in cands if c.raw == best_raw]
    if len(winners) > 1:
        # Tied maxima witness a symmetry.  The tie is tolerable exactly when
        # it cannot matter: every tied frame must prescribe the same absolute
        # action (a completed symmetric pattern where everyone stays, or the
        # final-phase vertical tie whose two readings provably coincide).
        # The one resolvable disagreement is a configuration lying entirely
        # on one corner's diagonal: its two transposed readings are as
        # unorderable as the collinear x axis, so the scheduler picks between
        # the mirrored destinations and the first robot off the diagonal
        # breaks the tie for good.
        results = []
        for w in winners:
            e = _election_from(w)
            results.append((e, *_frame_analysis(nodes, e, target)))
        e1, cv1, phase1, moves1 = results[0]
        if all(
            r[2] is phase1 and _moves_agree(moves1, r[3]) for r in results[1:]
        ):
            all_stay = all(mv is MoveDecision.STAY for mv, _ in moves1.values())
            return StillAnalysis(e1, cv1, phase1, moves1, all_stay, tied=True)
        if len(winners) == 2 and winners[0].origin == winners[1].origin:
            f1 = e1.frame
            if all(f1.to_frame(p)[0] == f1.to_frame(p)[1] for p in nodes):
                _, _, _, moves2 = results[1]
                merged: dict[Point, tuple[MoveDecision, object]] = {}
                for p, (mv1, d1) in moves1.items():
                    mv2, d2 = moves2[p]
                    if (d1 is None) != (d2 is None):
                        raise ElectionError(
                            "no-unique-leader", "diagonal tie movers disagree"
                        )
                    if d1 is None:
                        merged[p] = (MoveDecision.STAY, None)
                    elif d1 == d2 or (isinstance(d1, tuple) and isinstance(d1[0], tuple)):
                        merged[p] = (mv1, d1)
                    else:
                        merged[p] = (MoveDecision.ANY_HORIZONTAL, (d1, d2))
                all_stay = all(mv is MoveDecision.STAY for mv, _ in merged.values())
                return StillAnalysis(e1, cv1, phase1, merged, all_stay, tied=True)
        raise ElectionError(
            "no-unique-leader",
            f"{len(winners)} tied maximal corner strings disagree on the decision",
        )

    pool = [winners[0]]
    for c in cands:
        if c is winners[0]:
            continue
        # Frames that might read phase IV or later: a near-complete placement
        # (c1 or c2), or both diagonal corners occupied (the rearrangement
        # skeleton: the string starts and ends with 1).
        if (c.raw[0] == 1 and c.raw[-1] == 1) or _quick_late(c, nodes, target):
            pool.append(c)

    view_max = _FrameView(nodes, _election_from(winners[0]), target)
    if view_max.phase is Phase.III:
        # A walking tail can carry the string maximum back and forth between
        # two corner anchors; admit every corner-anchored reading so the
        # remaining-walk distance can commit one of them.
        for c in cands:
            if c not in pool and c.raw[0] == 1:
                pool.append(c)

    best = None  # (rank key, view)
    for idx, c in enumerate(pool):
        view = view_max if c is winners[0] else _FrameView(nodes, _election_from(c), target)
        dist = 0
        if view.phase in _DISTANCE_PHASES:
            dist = _remaining_distance(
                view.phase, view.robots_f, view.head_f, view.tail_f, target, view.cv
            )
        key = (-_PHASE_RANK[view.phase], dist, 0 if c is winners[0] else 1,
               c.raw != best_raw, idx)
        if best is None or key < best[0]:
            best = (key, view)
    view = best[1]

    if view.phase is Phase.IV:
        # Both far corners are occupied here; the diagonal twin reads the
        # mirrored rearrangement.  Commit to the cheaper pairing.
        f = view.election.frame
        w = 1 + max(p[0] for p in view.robots_f)
        cost = _pairing_cost(view.robots_f, target, w)
        ox, oy = f.origin
        xx, xy = f.x_dir
        yx, yy = f.y_dir
        h = 1 + max(p[1] for p in view.robots_f)
        twin_origin = (ox + (w - 1) * xx + (h - 1) * yx, oy + (w - 1) * xy + (h - 1) * yy)
        twin = next(
            (
                c
                for c in cands
                if c.origin == twin_origin and c.x_dir == (-xx, -xy) and c.y_dir == (-yx, -yy)
            ),
            None,
        )
        if twin is not None:
            view2 = _FrameView(nodes, _election_from(twin), target)
            if (view2.phase is Phase.IV
                    and _pairing_cost(view2.robots_f, target, w) < cost):
                view = view2

    moves = view.moves(target)
    all_stay = all(mv is MoveDecision.STAY for mv, _ in moves.values())
    return StillAnalysis(view.election, view.cv, view.phase, moves, all_stay, tied=False)


def decide_move(self_pos: Point, snapshot: Configuration, raw_target) -> MoveDecision:
    """Per-robot decision: the move this robot would compute from a snapshot."""
    if not snapshot.is_simple:
        raise ElectionError("no-unique-leader", "multiplicity present")
    nodes = snapshot.nodes
    self_pos = (int(self_pos[0]), int(self_pos[1]))
    if self_pos not in nodes:
        raise GeometryError("not-a-robot", f"{self_pos} is not occupied")
    target = embed_target_grid(None, raw_target)
    if target.k != len(nodes):
        raise GeometryError("target-size", f"{target.k} targets for {len(nodes)} robots")
    return analyze_still(nodes, target).moves[self_pos][0]


class GridDecider:
    """Snapshot decider for the simulator, caching the last analyzed still."""

    kind = "grid"

    def __init__(self, raw_target):
        self.target = embed_target_grid(None, raw_target)
        self._last: tuple[frozenset[Point], StillAnalysis] | None = None

    def __call__(self, nodes: frozenset[Point]) -> StillAnalysis:
        if self._last is not None and self._last[0] == nodes:
            return self._last[1]
        a = analyze_still(nodes, self.target)
        self._last = (nodes, a)
        return a
