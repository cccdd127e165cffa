"""Run orchestration: one scenario end to end, or a whole campaign.

A campaign fans runs out across worker processes (each run is independent
and deterministic) and aggregates formed-rates, violation reports, and the
observed extremes of the space and move envelopes.
"""

from __future__ import annotations

import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .engine import Engine, default_event_limit
from .grid import GridDecider
from .line import LineDecider
from .policies import make_policy
from .scenario import Scenario, generate_scenario, validate_admissible
from .verify import MetricsReport, compute_metrics, scenario_bounds, verify_all


@dataclass
class RunOutcome:
    scenario: Scenario
    policy: str
    seed: int
    verdict: str
    violation: str | None
    detail: str | None
    trace: list[dict]
    metrics: MetricsReport
    reports: list


def build_engine(
    scenario: Scenario,
    seed: int | None = None,
    fairness_window: int | None = None,
    max_events: int | None = None,
) -> Engine:
    validate_admissible(scenario)
    if scenario.kind == "grid":
        decider = GridDecider(scenario.target)
    else:
        decider = LineDecider((t[0] for t in scenario.target), scenario.k)
    d, _, _ = scenario_bounds(scenario)
    return Engine(
        scenario.robots,
        decider,
        seed=scenario.seed if seed is None else seed,
        fairness_window=fairness_window or scenario.fairness_window,
        max_events=max_events or default_event_limit(scenario.k, d),
    )


def run_one(
    scenario: Scenario,
    policy_name: str | None = None,
    seed: int | None = None,
    fairness_window: int | None = None,
    max_events: int | None = None,
    verify: bool = True,
) -> RunOutcome:
    policy_name = policy_name or scenario.policy
    seed = scenario.seed if seed is None else seed
    engine = build_engine(scenario, seed=seed, fairness_window=fairness_window,
                          max_events=max_events)
    policy = make_policy(policy_name, seed)
    res = engine.run(policy)
    metrics = compute_metrics(res.trace, scenario, discards=res.discards)
    reports = verify_all(res.trace, scenario, res.verdict, metrics) if verify else []
    return RunOutcome(
        scenario, policy_name, seed, res.verdict, res.violation, res.detail,
        res.trace, metrics, reports,
    )


@dataclass
class CampaignSummary:
    runs: int = 0
    formed: int = 0
    timeouts: int = 0
    violations: int = 0
    report_count: int = 0
    failures: list = field(default_factory=list)  # (gen_seed, policy, seed, what)
    max_space_margin: int = -(10**9)  # space_square - (D + 4), grid runs
    max_head: int = 0
    max_inner: int = 0
    max_tail: int = 0
    max_total_ratio_milli: int = 0  # 1000 * moves_total / (k * D)
    per_policy: dict = field(default_factory=dict)
    wall_seconds: float = 0.0

    def merge(self, other: "CampaignSummary") -> None:
        self.runs += other.runs
        self.formed += other.formed
        self.timeouts += other.timeouts
        self.violations += other.violations
        self.report_count += other.report_count
        self.failures.extend(other.failures)
        self.max_space_margin = max(self.max_space_margin, other.max_space_margin)
        self.max_head = max(self.max_head, other.max_head)
        self.max_inner = max(self.max_inner, other.max_inner)
        self.max_tail = max(self.max_tail, other.max_tail)
        self.max_total_ratio_milli = max(
            self.max_total_ratio_milli, other.max_total_ratio_milli
        )
        for key, val in other.per_policy.items():
            mine = self.per_policy.setdefault(key, {"runs": 0, "formed": 0})
            mine["runs"] += val["runs"]
            mine["formed"] += val["formed"]

    def to_dict(self) -> dict:
        return {
            "runs": self.runs,
            "formed": self.formed,
            "timeouts": self.timeouts,
            "violations": self.violations,
            "verifier_reports": self.report_count,
            "failures": self.failures[:50],
            "max_space_margin": self.max_space_margin,
            "max_moves": {
                "head": self.max_head,
                "inner": self.max_inner,
                "tail": self.max_tail,
                "total_over_kD": self.max_total_ratio_milli / 1000.0,
            },
            "per_policy": self.per_policy,
            "wall_seconds": round(self.wall_seconds, 3),
        }


def _run_batch(args) -> CampaignSummary:
    scenarios, policies, seeds, fairness_window = args
    s = CampaignSummary()
    for sc in scenarios:
        for pol in policies:
            stats = s.per_policy.setdefault(pol, {"runs": 0, "formed": 0})
            for seed in seeds:
                out = run_one(sc, pol, seed, fairness_window=fairness_window)
                s.runs += 1
                stats["runs"] += 1
                if out.verdict == "formed":
                    s.formed += 1
                    stats["formed"] += 1
                elif out.verdict == "timeout":
                    s.timeouts += 1
                    s.failures.append((sc.seed, pol, seed, "timeout"))
                else:
                    s.violations += 1
                    s.failures.append((sc.seed, pol, seed, f"{out.violation}: {out.detail}"))
                if out.reports:
                    s.report_count += len(out.reports)
                    s.failures.append(
                        (sc.seed, pol, seed, "; ".join(f"{r.kind}: {r.evidence}" for r in out.reports))
                    )
                mr = out.metrics
                if sc.kind == "grid":
                    s.max_space_margin = max(s.max_space_margin, mr.space_square - (mr.D + 4))
                role = mr.moves_per_role
                s.max_head = max(s.max_head, role["head"])
                s.max_inner = max(s.max_inner, role["inner_max"])
                s.max_tail = max(s.max_tail, role["tail"])
                s.max_total_ratio_milli = max(
                    s.max_total_ratio_milli, (1000 * mr.moves_total) // (sc.k * mr.D)
                )
    return s


def generate_scenarios(count: int, k_range: tuple[int, int], box: int, kind: str = "grid",
                       base_seed: int = 0) -> list[Scenario]:
    k_lo, k_hi = k_range
    out = []
    for i in range(count):
        k = k_lo + i % (k_hi - k_lo + 1)
        out.append(generate_scenario(k, box, base_seed + i, kind))
    return out


def campaign(
    scenarios: list[Scenario],
    policies: list[str],
    seeds: list[int],
    workers: int | None = None,
    fairness_window: int | None = None,
) -> CampaignSummary:
    t0 = time.monotonic()
    workers = workers if workers is not None else (os.cpu_count() or 1)
    total = CampaignSummary()
    if workers <= 1 or len(scenarios) < 2:
        total.merge(_run_batch((scenarios, policies, seeds, fairness_window)))
    else:
        chunk = max(1, len(scenarios) // (workers * 4))
        batches = [
            (scenarios[i : i + chunk], policies, seeds, fairness_window)
            for i in range(0, len(scenarios), chunk)
        ]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for part in pool.map(_run_batch, batches):
                total.merge(part)
    total.wall_seconds = time.monotonic() - t0
    return total
