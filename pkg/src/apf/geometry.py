"""Grid geometry primitives shared by every other module.

Coordinates are always exact integers; there is deliberately no floating
point anywhere in this package.  A configuration is a finite multiset of
occupied grid nodes.  The central primitive is the serpentine "corner
string": anchor a corner of the bounding rectangle, scan the incident side
outward, then sweep the parallel lines one by one, alternating direction,
writing 1 for occupied and 0 for empty.  Comparing the corner strings of a
configuration breaks symmetry, elects a coordinate frame, and names the
head and tail robots.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

import numpy as np

Point = tuple[int, int]
Direction = tuple[int, int]

_BIT_CHARS = bytes.maketrans(b"\x00\x01", b"01")


class GeometryError(ValueError):
    """Raised with a stable ``code`` for contract violations."""

    def __init__(self, code: str, message: str | None = None):
        super().__init__(message or code)
        self.code = code


class ElectionError(GeometryError):
    pass


@dataclass(frozen=True)
class Configuration:
    """Occupied nodes with multiplicities.

    Multiplicities are representable so violations can be reported, but every
    algorithm entry point rejects configurations that are not simple.
    """

    cells: tuple[tuple[Point, int], ...]  # sorted by node, counts >= 1

    @classmethod
    def from_points(cls, points: Iterable[Point]) -> "Configuration":
        counts: dict[Point, int] = {}
        for p in points:
            p = (int(p[0]), int(p[1]))
            counts[p] = counts.get(p, 0) + 1
        return cls(tuple(sorted(counts.items())))

    @classmethod
    def from_occupancy(cls, occupancy: Mapping[Point, int]) -> "Configuration":
        for p, c in occupancy.items():
            if c < 1:
                raise GeometryError("bad-occupancy", f"count {c} at {p}")
        return cls(tuple(sorted((tuple(p), int(c)) for p, c in occupancy.items())))

    @property
    def robot_count(self) -> int:
        return sum(c for _, c in self.cells)

    @property
    def nodes(self) -> frozenset[Point]:
        return frozenset(p for p, _ in self.cells)

    @property
    def is_simple(self) -> bool:
        return all(c == 1 for _, c in self.cells)

    def is_admissible_initial(self) -> bool:
        return self.is_simple and self.robot_count > 2


@dataclass(frozen=True)
class BoundingRect:
    """Tight axis-aligned rectangle; side lengths counted in grid points."""

    min_x: int
    min_y: int
    max_x: int
    max_y: int

    @property
    def width(self) -> int:
        return self.max_x - self.min_x + 1

    @property
    def height(self) -> int:
        return self.max_y - self.min_y + 1

    @property
    def m(self) -> int:  # long side
        return max(self.width, self.height)

    @property
    def n(self) -> int:  # short side; 1 in the collinear case
        return min(self.width, self.height)

    @property
    def corners(self) -> tuple[Point, Point, Point, Point]:
        return (
            (self.min_x, self.min_y),
            (self.max_x, self.min_y),
            (self.max_x, self.max_y),
            (self.min_x, self.max_y),
        )

    def contains(self, p: Point) -> bool:
        return self.min_x <= p[0] <= self.max_x and self.min_y <= p[1] <= self.max_y


@dataclass(frozen=True)
class BinaryLexString:
    """A serpentine occupancy string anchored at ``anchor_corner``.

    ``scan_side`` is the unit direction of the side scanned first.  ``bits``
    holds '0'/'1' characters; ordinary string comparison is the
    lexicographic order used everywhere.
    """

    anchor_corner: Point
    scan_side: Direction
    bits: str


@dataclass(frozen=True)
class GridIsometry:
    """A point-group isometry fixing a bounding rectangle.

    ``c2`` is the rectangle center in doubled coordinates, so reflections and
    rotations stay in integer arithmetic even when the center sits between
    nodes.
    """

    name: str
    c2: Point

    def fixes_pointwise(self, nodes) -> bool:
        """True when every occupied node maps to itself.

        Such a map (a reflection whose axis carries the whole configuration)
        is a symmetry of the infinite grid but acts trivially on the robots:
        it can never make two robots' views coincide, so election and the
        algorithm's symmetry conditions ignore it.
        """
        return all(self.apply(p) == p for p in nodes)

    def apply(self, p: Point) -> Point:
        x, y = p
        cx2, cy2 = self.c2
        if self.name == "rotation-180":
            return (cx2 - x, cy2 - y)
        if self.name == "reflection-vertical":  # vertical axis, swaps x
            return (cx2 - x, y)
        if self.name == "reflection-horizontal":  # horizontal axis, swaps y
            return (x, cy2 - y)
        # The remaining maps need (cx2 + cy2) even; holds whenever the
        # rectangle is square, the only case they are probed.
        s = (cx2 + cy2) // 2
        d = (cy2 - cx2) // 2
        if self.name == "rotation-90":
            return (s - y, d + x)
        if self.name == "rotation-270":
            return (y - d, s - x)
        if self.name == "reflection-diagonal-main":
            return (y - d, d + x)
        if self.name == "reflection-diagonal-anti":
            return (s - y, s - x)
        raise GeometryError("bad-isometry", self.name)


@dataclass(frozen=True)
class SymmetryClass:
    """Result of symmetry classification.

    ``kind`` is ``asymmetric`` or the strongest symmetry present;
    ``all_kinds`` lists every symmetry kind, ``witness`` one concrete
    isometry (None when asymmetric).
    """

    kind: str
    witness: GridIsometry | None
    all_kinds: tuple[str, ...] = ()
    witnesses: tuple[GridIsometry, ...] = ()

    @property
    def is_asymmetric(self) -> bool:
        return self.kind == "asymmetric"


@dataclass(frozen=True)
class CoordinateFrame:
    """Agreed origin and axes derived from the elected corner string.

    ``x_dir`` is None in the collinear (m x 1) case: the robots agree on the
    line's direction but not on which side is positive x.
    """

    origin: Point
    x_dir: Direction | None
    y_dir: Direction

    @property
    def x_axis_defined(self) -> bool:
        return self.x_dir is not None

    def to_frame(self, p: Point) -> Point:
        dx = p[0] - self.origin[0]
        dy = p[1] - self.origin[1]
        fy = dx * self.y_dir[0] + dy * self.y_dir[1]
        if self.x_dir is None:
            if dx * self.y_dir[1] - dy * self.y_dir[0] != 0:
                raise GeometryError("x-axis-undefined", f"{p} is off the line")
            return (0, fy)
        fx = dx * self.x_dir[0] + dy * self.x_dir[1]
        return (fx, fy)

    def from_frame(self, fp: Point) -> Point:
        fx, fy = fp
        if self.x_dir is None:
            if fx != 0:
                raise GeometryError("x-axis-undefined", f"frame x {fx} != 0")
            return (self.origin[0] + fy * self.y_dir[0], self.origin[1] + fy * self.y_dir[1])
        return (
            self.origin[0] + fx * self.x_dir[0] + fy * self.y_dir[0],
            self.origin[1] + fx * self.x_dir[1] + fy * self.y_dir[1],
        )


@dataclass(frozen=True)
class Election:
    frame: CoordinateFrame
    head: Point
    tail: Point
    string: BinaryLexString


# ---------------------------------------------------------------------------
# internal fast layer
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class _Candidate:
    origin: Point
    x_dir: Direction | None
    y_dir: Direction
    scan_w: int
    rows: int
    raw: bytes  # \x00/\x01 per scanned node

    def frame_at(self, idx: int) -> Point:
        row, p = divmod(idx, self.scan_w)
        col = p if row % 2 == 0 else self.scan_w - 1 - p
        return (col, row)

    def point_at(self, idx: int) -> Point:
        col, row = self.frame_at(idx)
        ox, oy = self.origin
        yx, yy = self.y_dir
        if self.x_dir is None:
            return (ox + row * yx, oy + row * yy)
        xx, xy = self.x_dir
        return (ox + col * xx + row * yx, oy + col * xy + row * yy)

    @property
    def bits(self) -> str:
        return self.raw.translate(_BIT_CHARS).decode("ascii")

    @property
    def scan_side(self) -> Direction:
        # For the collinear case the only scanned side is the line itself.
        return self.x_dir if self.x_dir is not None else self.y_dir


def _bounds(nodes: Iterable[Point]) -> BoundingRect:
    xs = [p[0] for p in nodes]
    ys = [p[1] for p in nodes]
    if not xs:
        raise GeometryError("empty-config")
    return BoundingRect(min(xs), min(ys), max(xs), max(ys))


def _grid_array(nodes: frozenset[Point] | set[Point], rect: BoundingRect) -> np.ndarray:
    a = np.zeros((rect.height, rect.width), dtype=np.uint8)
    xs = np.fromiter((p[0] - rect.min_x for p in nodes), dtype=np.intp, count=len(nodes))
    ys = np.fromiter((p[1] - rect.min_y for p in nodes), dtype=np.intp, count=len(nodes))
    a[ys, xs] = 1
    return a


def _serp_bytes(m: np.ndarray) -> bytes:
    s = m.copy()
    s[1::2] = s[1::2, ::-1]
    return s.tobytes()


def _candidates(nodes: frozenset[Point], rect: BoundingRect | None = None) -> list[_Candidate]:
    """The corner strings a configuration compares, in a fixed order.

    4 strings when the rectangle is a proper non-square (each corner, short
    side first), 8 for squares (both incident sides per corner, x side before
    y side), 2 in the collinear case (the two endpoints).  Corner order is
    bottom-left, bottom-right, top-right, top-left.
    """
    if not nodes:
        raise GeometryError("empty-config")
    rect = rect or _bounds(nodes)
    w, h = rect.width, rect.height
    a = _grid_array(nodes, rect)
    bl = (rect.min_x, rect.min_y)
    br = (rect.max_x, rect.min_y)
    tr = (rect.max_x, rect.max_y)
    tl = (rect.min_x, rect.max_y)

    if w == 1 or h == 1:
        v = a.ravel()
        axis = (0, 1) if w == 1 else (1, 0)
        length = max(w, h)
        low, high = bl, tr
        return [
            _Candidate(low, None, axis, 1, length, v.tobytes()),
            _Candidate(high, None, (-axis[0], -axis[1]), 1, length, v[::-1].tobytes()),
        ]

    def x_scans() -> list[_Candidate]:
        return [
            _Candidate(bl, (1, 0), (0, 1), w, h, _serp_bytes(a)),
            _Candidate(br, (-1, 0), (0, 1), w, h, _serp_bytes(a[:, ::-1])),
            _Candidate(tr, (-1, 0), (0, -1), w, h, _serp_bytes(a[::-1, ::-1])),
            _Candidate(tl, (1, 0), (0, -1), w, h, _serp_bytes(a[::-1, :])),
        ]

    def y_scans() -> list[_Candidate]:
        b = a.T
        return [
            _Candidate(bl, (0, 1), (1, 0), h, w, _serp_bytes(b)),
            _Candidate(br, (0, 1), (-1, 0), h, w, _serp_bytes(b[::-1, :])),
            _Candidate(tr, (0, -1), (-1, 0), h, w, _serp_bytes(b[::-1, ::-1])),
            _Candidate(tl, (0, -1), (1, 0), h, w, _serp_bytes(b[:, ::-1])),
        ]

    if w < h:
        return x_scans()
    if h < w:
        return y_scans()
    xs, ys = x_scans(), y_scans()
    out = []
    for i in range(4):
        out.append(xs[i])
        out.append(ys[i])
    return out


def _point_group_witnesses(cells: tuple[tuple[Point, int], ...]) -> tuple[GridIsometry, ...]:
    """Every non-trivial point-group isometry fixing the occupancy.

    Any automorphism fixing a finite configuration must fix its bounding
    rectangle, so only the 7 maps about the rectangle center need checking;
    quarter turns and diagonal reflections only when the rectangle is square.
    """
    nodes = [p for p, _ in cells]
    xs = [p[0] for p in nodes]
    ys = [p[1] for p in nodes]
    cx2 = min(xs) + max(xs)
    cy2 = min(ys) + max(ys)
    c2 = (cx2, cy2)
    simple = all(c == 1 for _, c in cells)
    node_set = frozenset(nodes)
    occ = None if simple else dict(cells)
    names = ["rotation-180", "reflection-vertical", "reflection-horizontal"]
    if max(xs) - min(xs) == max(ys) - min(ys):
        names += [
            "rotation-90",
            "rotation-270",
            "reflection-diagonal-main",
            "reflection-diagonal-anti",
        ]
    found = []
    for name in names:
        iso = GridIsometry(name, c2)
        if simple:
            ok = all(iso.apply(p) in node_set for p in nodes)
        else:
            ok = all(occ.get(iso.apply(p)) == c for p, c in cells)
        if ok:
            found.append(iso)
    return tuple(found)


_KIND_OF = {
    "rotation-90": "rotation-90",
    "rotation-270": "rotation-90",
    "rotation-180": "rotation-180",
    "reflection-vertical": "reflection-vertical",
    "reflection-horizontal": "reflection-horizontal",
    "reflection-diagonal-main": "reflection-diagonal",
    "reflection-diagonal-anti": "reflection-diagonal",
}

_KIND_PRIORITY = [
    "rotation-90",
    "reflection-vertical",
    "reflection-horizontal",
    "reflection-diagonal",
    "rotation-180",
]


def _effective_witnesses(
    witnesses: tuple[GridIsometry, ...], nodes
) -> tuple[GridIsometry, ...]:
    """Witnesses that move at least one occupied node."""
    return tuple(w for w in witnesses if not w.fixes_pointwise(nodes))


def _class_from_witnesses(
    witnesses: tuple[GridIsometry, ...], nodes
) -> SymmetryClass:
    """Classification counts only witnesses that permute robots.

    A pointwise-fixing reflection still appears in ``all_kinds`` and
    ``witnesses`` (it is a symmetry of the plane), but a configuration whose
    only symmetries fix every robot behaves asymmetrically: its corner
    strings are pairwise distinct and election succeeds.
    """
    effective = _effective_witnesses(witnesses, nodes)
    kinds = []
    for w in witnesses:
        k = _KIND_OF[w.name]
        if k not in kinds:
            kinds.append(k)
    kinds.sort(key=_KIND_PRIORITY.index)
    if not effective:
        return SymmetryClass("asymmetric", None, tuple(kinds), witnesses)
    eff_kinds = sorted({_KIND_OF[w.name] for w in effective}, key=_KIND_PRIORITY.index)
    witness = next(w for w in effective if _KIND_OF[w.name] == eff_kinds[0])
    return SymmetryClass(eff_kinds[0], witness, tuple(kinds), witnesses)


# ---------------------------------------------------------------------------
# public operations
# ---------------------------------------------------------------------------


def bounding_rect(config: Configuration) -> BoundingRect:
    """Tight bounding rectangle of the occupied nodes."""
    if not config.cells:
        raise GeometryError("empty-config")
    return _bounds([p for p, _ in config.cells])


def corner_string(
    config: Configuration,
    rect: BoundingRect,
    corner: Point,
    scan_side: Direction,
) -> BinaryLexString:
    """Serpentine occupancy string from ``corner``, scanning ``scan_side`` first.

    The incident side is scanned from the corner outward, then each parallel
    line in turn, even lines (1-based) scanned back toward the anchor column.
    """
    corner = (int(corner[0]), int(corner[1]))
    if corner not in rect.corners:
        raise GeometryError("bad-anchor", f"{corner} is not a corner of {rect}")
    dx, dy = scan_side
    if (dx, dy) not in ((1, 0), (-1, 0), (0, 1), (0, -1)):
        raise GeometryError("bad-anchor", f"scan side {scan_side} is not a unit direction")
    inside = rect.contains((corner[0] + dx, corner[1] + dy))
    if not inside and rect.width * rect.height > 1:
        raise GeometryError("bad-anchor", f"side {scan_side} at {corner} leaves the rectangle")

    nodes = config.nodes
    a = _grid_array(nodes, rect)

    if rect.width == 1 and rect.height == 1:
        return BinaryLexString(corner, scan_side, a.ravel().tobytes().translate(_BIT_CHARS).decode())

    # Orient the occupancy array so the anchor is at [0, 0] and columns run
    # along the scanned side.
    m = a
    if dy != 0:
        m = m.T  # rows now indexed by x, columns by y
        scan_rev = (dy == -1)
        row_rev = (corner[0] == rect.max_x)
        scan_len, n_rows = rect.height, rect.width
    else:
        scan_rev = (dx == -1)
        row_rev = (corner[1] == rect.max_y)
        scan_len, n_rows = rect.width, rect.height
    if n_rows == 1 and scan_len == 1:
        raise GeometryError("bad-anchor", "degenerate side")
    if row_rev:
        m = m[::-1, :]
    if scan_rev:
        m = m[:, ::-1]
    if n_rows == 1:
        bits = m.ravel().tobytes()
    else:
        bits = _serp_bytes(m)
    return BinaryLexString(corner, scan_side, bits.translate(_BIT_CHARS).decode())


def candidate_strings(
    config: Configuration,
) -> list[tuple[Point, Direction, BinaryLexString]]:
    """The full set of corner strings the configuration compares."""
    cands = _candidates(config.nodes)
    return [
        (c.origin, c.scan_side, BinaryLexString(c.origin, c.scan_side, c.bits))
        for c in cands
    ]


def classify_symmetry(config: Configuration) -> SymmetryClass:
    """Asymmetric iff all corner strings are pairwise distinct.

    For symmetric configurations the class and a witnessing isometry come
    from the exhaustive point-group check.  Configurations with multiplicity
    (invisible to occupancy strings) go straight to the exhaustive check.
    """
    if not config.cells:
        raise GeometryError("empty-config")
    nodes = config.nodes
    witnesses = _point_group_witnesses(config.cells)
    if config.is_simple:
        cands = _candidates(nodes)
        raws = [c.raw for c in cands]
        distinct = len(set(raws)) == len(raws)
        effective = _effective_witnesses(witnesses, nodes)
        # Robot-permuting symmetry always collides two strings.  The converse
        # fails only for configurations carried by a single line or diagonal,
        # where the colliding scans are fixed pointwise and election-neutral.
        if distinct and effective:
            raise GeometryError(
                "string-oracle-mismatch",
                "distinct corner strings despite a robot-permuting isometry",
            )
    return _class_from_witnesses(witnesses, nodes)


def _elect_max(nodes: frozenset[Point]) -> list[_Candidate]:
    cands = _candidates(nodes)
    best = max(c.raw for c in cands)
    return [c for c in cands if c.raw == best]


def _election_from(c: _Candidate) -> Election:
    first = c.raw.find(b"\x01")
    last = c.raw.rfind(b"\x01")
    frame = CoordinateFrame(c.origin, c.x_dir, c.y_dir)
    return Election(
        frame,
        c.point_at(first),
        c.point_at(last),
        BinaryLexString(c.origin, c.scan_side, c.bits),
    )


def elect_frame(config: Configuration) -> Election:
    """Frame election: the unique lexicographically largest corner string wins.

    Its anchor becomes the origin, its scan side the x-axis (undefined in the
    collinear case), the remaining incident side the y-axis.  The robots on
    the first and last 1 of the winning string are the head and the tail.
    """
    if not config.is_simple:
        raise ElectionError("no-unique-leader", "multiplicity present")
    winners = _elect_max(config.nodes)
    if len(winners) != 1:
        raise ElectionError("no-unique-leader", "tied maximal corner strings")
    return _election_from(winners[0])


def _canonical_form(cells: tuple[tuple[Point, int], ...]) -> tuple:
    best = None
    pts = [(p, c) for p, c in cells]
    for name in (
        "identity",
        "rotation-90",
        "rotation-180",
        "rotation-270",
        "reflection-vertical",
        "reflection-horizontal",
        "reflection-diagonal-main",
        "reflection-diagonal-anti",
    ):
        if name == "identity":
            mapped = [(p, c) for p, c in pts]
        else:
            iso = GridIsometry(name, (0, 0))
            mapped = [(iso.apply(p), c) for p, c in pts]
        mnx = min(p[0] for p, _ in mapped)
        mny = min(p[1] for p, _ in mapped)
        form = tuple(sorted(((p[0] - mnx, p[1] - mny), c) for p, c in mapped))
        if best is None or form < best:
            best = form
    return best


def patterns_equivalent(a: Configuration, b: Configuration) -> bool:
    """True iff some translation/rotation/reflection maps a onto b."""
    if not a.cells or not b.cells:
        return a.cells == b.cells
    if a.robot_count != b.robot_count:
        return False
    return _canonical_form(a.cells) == _canonical_form(b.cells)
