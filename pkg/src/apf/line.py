"""Pattern formation on an infinite line of grid nodes.

The leader election anchors the origin at the endpoint whose occupancy
string is lexicographically *larger*, the same convention as the grid's
leading corner.  This is what makes the movement rules sound: an inner robot
stepping toward the origin only strengthens the origin's string, and the
tail (the far, smaller-string end) extending the segment outward keeps its
own string smaller, so the coordinate system never flips mid-run.  The
decision function is pure and position-anonymous: a robot knows only its
own coordinate, the snapshot, and the target multiset.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable


class LineError(ValueError):
    def __init__(self, code: str, message: str | None = None):
        super().__init__(message or code)
        self.code = code


class LineMove(enum.Enum):
    """A decision in frame coordinates; left means toward the origin."""

    STAY = "stay"
    LEFT = "left"
    RIGHT = "right"


@dataclass(frozen=True)
class LineConfiguration:
    positions: tuple[int, ...]  # strictly increasing

    @classmethod
    def from_positions(cls, positions: Iterable[int]) -> "LineConfiguration":
        pos = tuple(sorted(set(int(p) for p in positions)))
        return cls(pos)

    @property
    def k(self) -> int:
        return len(self.positions)

    @property
    def span(self) -> int:
        return self.positions[-1] - self.positions[0] + 1


@dataclass(frozen=True)
class LineElection:
    origin: int           # endpoint with the larger string
    direction: int        # +1 or -1, origin -> far end
    head: int             # robot at the origin
    tail: int             # robot at the far end


@dataclass(frozen=True)
class LineTargetEmbedding:
    targets: tuple[int, ...]  # sorted frame coordinates, min == 0

    @property
    def t_target(self) -> int:
        return self.targets[-1]

    @property
    def head_anchor(self) -> int:
        return 0

    @property
    def inner(self) -> tuple[int, ...]:
        return self.targets[:-1]


def endpoint_string(positions: tuple[int, ...], end: int, direction: int) -> str:
    """Occupancy string of the enclosing segment read from ``end`` inward."""
    occupied = set(positions)
    span = max(positions) - min(positions) + 1
    return "".join("1" if end + i * direction in occupied else "0" for i in range(span))


def line_elect(config: LineConfiguration) -> LineElection:
    """Origin goes to the endpoint with the lexicographically larger string."""
    pos = config.positions
    if len(pos) < 2:
        raise LineError("too-few-robots")
    lo, hi = pos[0], pos[-1]
    s_lo = endpoint_string(pos, lo, +1)
    s_hi = endpoint_string(pos, hi, -1)
    if s_lo == s_hi:
        raise LineError("line-symmetric", "endpoint strings are equal")
    if s_lo > s_hi:
        return LineElection(lo, +1, lo, hi)
    return LineElection(hi, -1, hi, lo)


def embed_target_line(target_integers: Iterable[int], k: int) -> LineTargetEmbedding:
    """Normalize a line target so its larger-string end sits at 0.

    A reflection-symmetric target reads the same from either end, so the
    plain left-anchored normalization is used there.
    """
    targets = tuple(sorted(set(int(t) for t in target_integers)))
    if len(targets) != k:
        raise LineError("bad-target", f"expected {k} distinct targets, got {len(targets)}")
    lo, hi = targets[0], targets[-1]
    s_lo = endpoint_string(targets, lo, +1)
    s_hi = endpoint_string(targets, hi, -1)
    if s_hi > s_lo:
        normalized = tuple(sorted(hi - t for t in targets))
    else:
        normalized = tuple(t - lo for t in targets)
    return LineTargetEmbedding(normalized)


def decide_all(
    config: LineConfiguration, target: LineTargetEmbedding
) -> dict[int, tuple[LineMove, int | None]]:
    """Decision for every robot of a still snapshot, keyed by position.

    Returns frame-relative moves plus the absolute destination node.  The
    head never moves.  Exactly the branch order of the line algorithm: a
    completed inner pattern sends only the tail toward its target; a tail
    short of the far target moves right; otherwise inner robots close up,
    left moves first, right moves only once no inner robot still needs a
    left move.
    """
    lo, hi = config.positions[0], config.positions[-1]
    fwd = tuple(p - lo for p in config.positions)
    rev = tuple(sorted(hi - p for p in config.positions))
    if fwd == target.targets or rev == target.targets:
        # Pattern formed; a symmetric target makes the final configuration
        # symmetric, so this must be recognized without an election.
        return {p: (LineMove.STAY, None) for p in config.positions}

    el = line_elect(config)
    d = el.direction
    frame = sorted((p - el.origin) * d for p in config.positions)
    occupied = set(frame)
    k = len(frame)
    tail_f = frame[-1]
    inner_targets = set(target.inner)

    def absolute(fpos: int) -> int:
        return el.origin + fpos * d

    moves: dict[int, tuple[LineMove, int | None]] = {
        absolute(f): (LineMove.STAY, None) for f in frame
    }

    def set_move(fpos: int, mv: LineMove) -> None:
        step = 1 if mv is LineMove.RIGHT else -1
        moves[absolute(fpos)] = (mv, absolute(fpos + step))

    if set(frame[:-1]) == inner_targets:
        if tail_f != target.t_target:
            set_move(tail_f, LineMove.RIGHT if target.t_target > tail_f else LineMove.LEFT)
        return moves
    if target.t_target > tail_f:
        set_move(tail_f, LineMove.RIGHT)
        return moves

    # Inner robots move; ranks are recomputed from the snapshot each time.
    needs_left = any(
        target.targets[i] < frame[i] for i in range(1, k - 1)
    )
    for i in range(1, k - 1):
        r_i, t_i = frame[i], target.targets[i]
        if t_i < r_i:
            if r_i - 1 not in occupied:
                set_move(r_i, LineMove.LEFT)
        elif t_i > r_i and not needs_left:
            if r_i + 1 not in occupied:
                set_move(r_i, LineMove.RIGHT)
    return moves


def apf_line_decide(
    self_pos: int, snapshot: LineConfiguration, target: LineTargetEmbedding
) -> LineMove:
    """Per-robot decision; ``self_pos`` must be occupied in the snapshot."""
    if self_pos not in snapshot.positions:
        raise LineError("not-a-robot", f"{self_pos} is not occupied")
    return decide_all(snapshot, target)[self_pos][0]


@dataclass
class LineStill:
    """Snapshot analysis in the shape the simulator consumes."""

    moves: dict[tuple, tuple[LineMove, object]]
    all_stay: bool
    phase_label = None
    conds_bits = None


class LineDecider:
    """Snapshot decider over 1-tuple nodes, for the simulator."""

    kind = "line"

    def __init__(self, raw_target, k: int):
        self.embedding = embed_target_line(raw_target, k)
        self._last: tuple[frozenset, LineStill] | None = None

    def __call__(self, nodes: frozenset) -> LineStill:
        if self._last is not None and self._last[0] == nodes:
            return self._last[1]
        config = LineConfiguration.from_positions(n[0] for n in nodes)
        raw = decide_all(config, self.embedding)
        moves = {
            (p,): (mv, None if dest is None else (dest,)) for p, (mv, dest) in raw.items()
        }
        still = LineStill(moves, all(mv is LineMove.STAY for mv, _ in raw.values()))
        self._last = (nodes, still)
        return still
