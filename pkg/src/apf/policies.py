"""Scheduler policies: the adversary choosing which enabled event fires.

Every policy is fair: no robot goes unactivated for more than the engine's
fairness window, and no pending move is withheld past it either.  Within
that constraint the policies range from lockstep rounds to adversaries that
deliberately maximize stale-snapshot windows.
"""

from __future__ import annotations

import random

from .engine import Engine


def _forced(engine: Engine) -> tuple[str, int] | None:
    """The most urgent fairness obligation, if any is close to the window."""
    slack = engine.fairness_window - engine.k - 1
    choice = None
    worst = None
    for r in engine.robots:
        if r.state == "idle":
            age = engine.t - r.last_activation
        else:
            age = engine.t - r.pending_since
        if age >= slack and (worst is None or age > worst):
            worst = age
            choice = ("activate" if r.state == "idle" else "arrive", r.id)
    return choice


class FsyncPolicy:
    """All robots look together, then every move departs and lands."""

    name = "fsync"

    def __init__(self, seed: int = 0):
        self._round: list[int] = []

    def next(self, engine: Engine, enabled=None) -> tuple[str, int]:
        while self._round:
            rid = self._round.pop()
            if engine.robots[rid].state == "idle":
                return ("activate", rid)
        computed = [r.id for r in engine.robots if r.state == "computed"]
        if computed:
            return ("arrive", computed[0])
        transit = [r.id for r in engine.robots if r.state == "transit"]
        if transit:
            return ("arrive", transit[0])
        self._round = [r.id for r in engine.robots][::-1]
        return ("activate", self._round.pop())


class SsyncRandomPolicy:
    """Round-based with a random nonempty subset activated each round."""

    name = "ssync-random"

    def __init__(self, seed: int = 0):
        self.rng = random.Random(f"{seed}:ssync")
        self._round: list[int] = []

    def next(self, engine: Engine, enabled=None) -> tuple[str, int]:
        while self._round:
            rid = self._round.pop()
            if engine.robots[rid].state == "idle":
                return ("activate", rid)
        computed = [r.id for r in engine.robots if r.state == "computed"]
        if computed:
            return ("arrive", computed[0])
        transit = [r.id for r in engine.robots if r.state == "transit"]
        if transit:
            return ("arrive", transit[0])
        half_window = engine.fairness_window // 2
        chosen = [
            r.id
            for r in engine.robots
            if self.rng.random() < 0.5 or engine.t - r.last_activation >= half_window
        ]
        if not chosen:
            chosen = [self.rng.randrange(engine.k)]
        self._round = chosen[::-1]
        return ("activate", self._round.pop())


class AsyncRandomPolicy:
    """Uniformly random over the enabled events, with fairness forcing."""

    name = "async-random"

    def __init__(self, seed: int = 0):
        self.rng = random.Random(f"{seed}:async")

    def next(self, engine: Engine, enabled=None) -> tuple[str, int]:
        forced = _forced(engine)
        if forced is not None:
            return forced
        if enabled is None:
            enabled = [
                ("activate" if r.state == "idle" else "arrive", r.id)
                for r in engine.robots
            ]
        return enabled[self.rng.randrange(len(enabled))]


class AsyncGreedySplitPolicy:
    """Puts as many movers on edges at once as it can before landing any."""

    name = "async-greedy-split"

    def __init__(self, seed: int = 0):
        self.rng = random.Random(f"{seed}:greedy")

    def next(self, engine: Engine, enabled=None) -> tuple[str, int]:
        forced = _forced(engine)
        if forced is not None:
            return forced
        computed = [r.id for r in engine.robots if r.state == "computed"]
        if computed:
            return ("arrive", self.rng.choice(computed))
        if engine.transit_count:
            idle = [r.id for r in engine.robots if r.state == "idle"]
            # half the time poke an idle robot so it sees the edge and discards
            if idle and self.rng.random() < 0.5:
                return ("activate", self.rng.choice(idle))
            transit = [r.id for r in engine.robots if r.state == "transit"]
            return ("arrive", self.rng.choice(transit))
        if enabled is None:
            enabled = [
                ("activate" if r.state == "idle" else "arrive", r.id)
                for r in engine.robots
            ]
        return enabled[self.rng.randrange(len(enabled))]


class AsyncStalePolicy:
    """Deterministic stress adversary maximizing stale-snapshot windows.

    Before any pending move completes, every idle robot is activated so it
    observes either the pre-move configuration or the robot on its edge (and
    discards).  Pending moves then execute oldest first, one at a time, so
    every remaining pending decision grows staler with each landing.
    """

    name = "async-stale"

    def __init__(self, seed: int = 0):
        pass

    def next(self, engine: Engine, enabled=None) -> tuple[str, int]:
        stale = [
            r.id
            for r in engine.robots
            if r.state == "idle" and r.last_activation < engine.last_change_t
        ]
        if stale:
            return ("activate", stale[0])
        transit = [r.id for r in engine.robots if r.state == "transit"]
        if transit:
            return ("arrive", transit[0])
        computed = sorted(
            (r.pending_since, r.id) for r in engine.robots if r.state == "computed"
        )
        if computed:
            return ("arrive", computed[0][1])
        idle = [r.id for r in engine.robots if r.state == "idle"]
        return ("activate", idle[0])


POLICIES = {
    "fsync": FsyncPolicy,
    "ssync-random": SsyncRandomPolicy,
    "async-random": AsyncRandomPolicy,
    "async-greedy-split": AsyncGreedySplitPolicy,
    "async-stale": AsyncStalePolicy,
}


def make_policy(name: str, seed: int = 0):
    if name not in POLICIES:
        raise ValueError(f"unknown policy {name!r}; known: {sorted(POLICIES)}")
    return POLICIES[name](seed)
