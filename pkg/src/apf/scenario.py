"""Scenario records: strict parsing, admissibility checks, generation.

A scenario file is JSON:

    {"version": 1, "kind": "grid", "robots": [[x, y], ...],
     "target": [[x, y], ...], "seed": 7, "policy": "async-random",
     "fairness_window": 64}

Line scenarios use 1-element coordinates.  ``seed``, ``policy`` and
``fairness_window`` are optional defaults that the CLI can override.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field

from .geometry import Configuration, classify_symmetry
from .line import LineConfiguration, line_elect, LineError

SCENARIO_VERSION = 1


class ScenarioError(ValueError):
    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code


@dataclass(frozen=True)
class Scenario:
    kind: str  # "grid" | "line"
    robots: tuple[tuple, ...]
    target: tuple[tuple, ...]
    seed: int = 0
    policy: str = "async-random"
    fairness_window: int | None = None
    version: int = SCENARIO_VERSION

    @property
    def k(self) -> int:
        return len(self.robots)

    def to_json(self) -> str:
        doc = {
            "version": self.version,
            "kind": self.kind,
            "robots": [list(r) for r in self.robots],
            "target": [list(t) for t in self.target],
            "seed": self.seed,
            "policy": self.policy,
        }
        if self.fairness_window is not None:
            doc["fairness_window"] = self.fairness_window
        return json.dumps(doc, separators=(",", ":"), sort_keys=True)


def _parse_points(raw, dim: int, label: str) -> tuple[tuple, ...]:
    if not isinstance(raw, list) or not raw:
        raise ScenarioError("inadmissible", f"{label} must be a non-empty list")
    out = []
    for i, item in enumerate(raw):
        if (
            not isinstance(item, list)
            or len(item) != dim
            or not all(isinstance(c, int) and not isinstance(c, bool) for c in item)
        ):
            raise ScenarioError(
                "inadmissible", f"{label}[{i}] must be a list of {dim} integers, got {item!r}"
            )
        out.append(tuple(item))
    return tuple(out)


def parse_scenario(text: str) -> Scenario:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ScenarioError("parse", f"not valid JSON: {e}") from None
    if not isinstance(doc, dict):
        raise ScenarioError("parse", "scenario must be a JSON object")
    if doc.get("version") != SCENARIO_VERSION:
        raise ScenarioError("parse", f"unsupported version {doc.get('version')!r}")
    kind = doc.get("kind")
    if kind not in ("grid", "line"):
        raise ScenarioError("parse", f"kind must be 'grid' or 'line', got {kind!r}")
    dim = 2 if kind == "grid" else 1
    robots = _parse_points(doc.get("robots"), dim, "robots")
    target = _parse_points(doc.get("target"), dim, "target")
    seed = doc.get("seed", 0)
    if not isinstance(seed, int):
        raise ScenarioError("parse", "seed must be an integer")
    policy = doc.get("policy", "async-random")
    if not isinstance(policy, str):
        raise ScenarioError("parse", "policy must be a string")
    fw = doc.get("fairness_window")
    if fw is not None and (not isinstance(fw, int) or fw < 1):
        raise ScenarioError("parse", "fairness_window must be a positive integer")
    unknown = set(doc) - {"version", "kind", "robots", "target", "seed", "policy",
                          "fairness_window"}
    if unknown:
        raise ScenarioError("parse", f"unknown fields: {sorted(unknown)}")
    return Scenario(kind, robots, target, seed, policy, fw)


def load_scenario(path: str) -> Scenario:
    with open(path, "r", encoding="utf-8") as f:
        sc = parse_scenario(f.read())
    validate_admissible(sc)
    return sc


def validate_admissible(sc: Scenario) -> None:
    """Raise with the failing admissibility clause, or return silently."""
    if len(set(sc.robots)) != len(sc.robots):
        raise ScenarioError("inadmissible", "robots must occupy distinct nodes")
    if sc.k <= 2:
        raise ScenarioError("inadmissible", f"need more than 2 robots, got {sc.k}")
    if len(set(sc.target)) != len(sc.target):
        raise ScenarioError("inadmissible", "target positions must be distinct")
    if len(sc.target) != sc.k:
        raise ScenarioError(
            "inadmissible", f"target size {len(sc.target)} != robot count {sc.k}"
        )
    if sc.kind == "grid":
        cls = classify_symmetry(Configuration.from_points(sc.robots))
        if not cls.is_asymmetric:
            raise ScenarioError(
                "inadmissible", f"initial configuration is symmetric ({cls.kind})"
            )
    else:
        try:
            line_elect(LineConfiguration.from_positions(p[0] for p in sc.robots))
        except LineError:
            raise ScenarioError(
                "inadmissible", "initial line configuration is reflection-symmetric"
            ) from None


def generate_scenario(
    k: int,
    box: tuple[int, int] | int,
    seed: int,
    kind: str = "grid",
    max_rejections: int = 1000,
) -> Scenario:
    """Rejection-sample an admissible scenario, deterministically per seed.

    Robots are resampled until asymmetric; the target is sampled
    independently and may be symmetric.
    """
    if k <= 2:
        raise ScenarioError("inadmissible", f"need more than 2 robots, got {k}")
    rng = random.Random(f"scenario:{kind}:{k}:{box}:{seed}")
    if kind == "grid":
        bw, bh = (box, box) if isinstance(box, int) else box
        if bw < 2 or bh < 2:
            raise ScenarioError("inadmissible", f"box {box} too small for a grid scenario")
        if bw * bh < k:
            raise ScenarioError("inadmissible", f"box {box} cannot hold {k} robots")
        cells = [(x, y) for x in range(bw) for y in range(bh)]
        for _ in range(max_rejections):
            robots = tuple(sorted(rng.sample(cells, k)))
            if classify_symmetry(Configuration.from_points(robots)).is_asymmetric:
                break
        else:
            raise ScenarioError(
                "generation-exhausted",
                f"no asymmetric placement of {k} robots in {box} after {max_rejections} tries",
            )
        target = tuple(sorted(rng.sample(cells, k)))
        return Scenario("grid", robots, target, seed)
    if kind == "line":
        length = box if isinstance(box, int) else box[0]
        if length < k:
            raise ScenarioError("inadmissible", f"line of length {length} cannot hold {k}")
        cells = list(range(length))
        for _ in range(max_rejections):
            pos = sorted(rng.sample(cells, k))
            try:
                line_elect(LineConfiguration.from_positions(pos))
                robots = tuple((p,) for p in pos)
                break
            except LineError:
                continue
        else:
            raise ScenarioError(
                "generation-exhausted",
                f"no asymmetric placement of {k} robots on {length} nodes "
                f"after {max_rejections} tries",
            )
        target = tuple((p,) for p in sorted(rng.sample(cells, k)))
        return Scenario("line", robots, target, seed)
    raise ScenarioError("parse", f"unknown kind {kind!r}")
