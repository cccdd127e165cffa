"""Command line front end: run, campaign, verify, replay, serve, line-run.

Exit codes: 0 on success, 1 when any run fails or a verifier reports a
violation, 2 on usage or parse errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import traceio
from .runner import campaign, generate_scenarios, run_one
from .scenario import ScenarioError, generate_scenario, load_scenario
from .verify import compute_metrics, verify_all


def _metrics_doc(mr) -> dict:
    return {
        "D": mr.D,
        "M": mr.M,
        "N": mr.N,
        "space_square": mr.space_square,
        "space_rect": list(mr.space_rect),
        "moves_total": mr.moves_total,
        "moves_by_robot": list(mr.moves_by_robot),
        "moves_per_role": mr.moves_per_role,
        "phase_sequence": list(mr.phase_sequence),
        "discards": mr.discards,
        "events": mr.events,
    }


def cmd_run(args) -> int:
    sc = load_scenario(args.scenario)
    if args.kind and sc.kind != args.kind:
        print(f"scenario kind is {sc.kind!r}, expected {args.kind!r}", file=sys.stderr)
        return 2
    out = run_one(
        sc,
        args.policy or sc.policy,
        sc.seed if args.seed is None else args.seed,
        fairness_window=args.fairness_window,
        max_events=args.max_events,
    )
    if args.out:
        traceio.write_trace(out.trace, args.out)
        traceio.write_meta(args.out, sc, out.policy, out.seed, out.verdict, out.violation)
        with open(args.out + ".metrics.json", "w", encoding="utf-8") as f:
            json.dump(_metrics_doc(out.metrics), f, indent=1, sort_keys=True)
            f.write("\n")
    print(f"verdict: {out.verdict}" + (f" ({out.violation}: {out.detail})" if out.violation else ""))
    print(f"events: {out.metrics.events}  moves: {out.metrics.moves_total}  "
          f"discards: {out.metrics.discards}")
    print(f"space: square {out.metrics.space_square} (D+4 = {out.metrics.D + 4}), "
          f"rect {out.metrics.space_rect} (bound ({out.metrics.M + 4}, {out.metrics.N + 1}))")
    print(f"moves per role: {out.metrics.moves_per_role}")
    for rep in out.reports:
        print(f"VIOLATION {rep.kind}: {rep.evidence}")
    return 0 if out.verdict == "formed" and not out.reports else 1


def cmd_line_run(args) -> int:
    args.kind = "line"
    return cmd_run(args)


def _parse_k(spec: str) -> tuple[int, int]:
    if ".." in spec:
        lo, hi = spec.split("..", 1)
        return (int(lo), int(hi))
    v = int(spec)
    return (v, v)


def cmd_campaign(args) -> int:
    k_lo, k_hi = _parse_k(args.k)
    scenarios = generate_scenarios(args.count, (k_lo, k_hi), args.box,
                                   kind=args.kind, base_seed=args.base_seed)
    policies = args.policies.split(",")
    seeds = list(range(args.seeds))
    summary = campaign(scenarios, policies, seeds, workers=args.workers,
                       fairness_window=args.fairness_window)
    doc = summary.to_dict()
    if args.out:
        with open(args.out, "w", encoding="utf-8") as f:
            json.dump(doc, f, indent=1, sort_keys=True)
            f.write("\n")
    print(f"runs: {doc['runs']}  formed: {doc['formed']}  "
          f"timeouts: {doc['timeouts']}  violations: {doc['violations']}  "
          f"verifier reports: {doc['verifier_reports']}")
    for pol, st in sorted(doc["per_policy"].items()):
        print(f"  {pol}: {st['formed']}/{st['runs']} formed")
    print(f"max space margin (square - (D+4)): {doc['max_space_margin']}")
    print(f"observed move maxima: {doc['max_moves']}")
    print(f"wall: {doc['wall_seconds']}s")
    for f_ in doc["failures"][:10]:
        print("  failure:", f_)
    return 0 if doc["formed"] == doc["runs"] and doc["verifier_reports"] == 0 else 1


def cmd_verify(args) -> int:
    trace = traceio.read_trace(args.trace)
    meta = traceio.read_meta(args.trace)
    if args.scenario:
        sc = load_scenario(args.scenario)
        verdict = meta["verdict"] if meta else "formed"
    elif meta:
        from .scenario import parse_scenario

        sc = parse_scenario(json.dumps(meta["scenario"]))
        verdict = meta["verdict"]
    else:
        print("no scenario: pass --scenario or keep the .meta.json sidecar", file=sys.stderr)
        return 2
    reports = verify_all(trace, sc, verdict)
    mr = compute_metrics(trace, sc)
    print(f"verdict: {verdict}  events: {mr.events}  moves: {mr.moves_total}")
    print(f"space square {mr.space_square} <= D+4 = {mr.D + 4}; "
          f"rect {mr.space_rect} <= ({mr.M + 4}, {mr.N + 1})")
    if reports:
        for rep in reports:
            print(f"VIOLATION {rep.kind} @ {rep.event_index}: {rep.evidence}")
        return 1
    print("all checks passed")
    return 0


def cmd_replay(args) -> int:
    trace = traceio.read_trace(args.trace)
    meta = traceio.read_meta(args.trace)
    if args.scenario:
        sc = load_scenario(args.scenario)
    elif meta:
        from .scenario import parse_scenario

        sc = parse_scenario(json.dumps(meta["scenario"]))
    else:
        print("no scenario: pass --scenario or keep the .meta.json sidecar", file=sys.stderr)
        return 2
    pos = {i: tuple(r) for i, r in enumerate(sc.robots)}
    edges: dict[int, tuple] = {}
    limit = args.limit or len(trace)
    for rec in trace[:limit]:
        t, ev, rid = rec["t"], rec["ev"], rec["robot"]
        if ev == "activate":
            extra = f" phase {rec['phase']} conds {rec['conds']}" if rec["phase"] else ""
            print(f"{t:6d}  robot {rid} looks{extra}")
        elif ev == "discard":
            print(f"{t:6d}  robot {rid} looks, sees a robot on an edge, discards")
        elif rid in edges:
            edges.pop(rid)
            pos[rid] = rec["to"]
            print(f"{t:6d}  robot {rid} lands at {rec['to']}")
        else:
            edges[rid] = (rec["from"], rec["to"])
            pos[rid] = None
            print(f"{t:6d}  robot {rid} leaves {rec['from']} toward {rec['to']}")
    print("final:", sorted(p for p in pos.values() if p is not None))
    return 0


def cmd_serve(args) -> int:
    from .service import serve

    serve(port=args.port, static_dir=args.static)
    return 0


def cmd_generate(args) -> int:
    sc = generate_scenario(args.k, args.box, args.seed, args.kind)
    text = sc.to_json()
    if args.out:
        with open(args.out, "w", encoding="utf-8") as f:
            f.write(text + "\n")
    else:
        print(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="apf", description=__doc__)
    sub = p.add_subparsers(dest="cmd", required=True)

    def add_run_opts(sp):
        sp.add_argument("--scenario", required=True)
        sp.add_argument("--policy", default=None)
        sp.add_argument("--seed", type=int, default=None)
        sp.add_argument("--out", default=None, help="trace file (writes .meta.json sidecar)")
        sp.add_argument("--fairness-window", type=int, default=None)
        sp.add_argument("--max-events", type=int, default=None)

    sp = sub.add_parser("run", help="run one scenario, write trace and metrics")
    add_run_opts(sp)
    sp.set_defaults(func=cmd_run, kind=None)

    sp = sub.add_parser("line-run", help="run a line scenario")
    add_run_opts(sp)
    sp.set_defaults(func=cmd_line_run)

    sp = sub.add_parser("campaign", help="sweep scenarios x policies x seeds")
    sp.add_argument("--count", type=int, default=100)
    sp.add_argument("--k", default="3..12", help="robot count or range, e.g. 3..12")
    sp.add_argument("--box", type=int, default=30)
    sp.add_argument("--kind", choices=("grid", "line"), default="grid")
    sp.add_argument("--policies", default="fsync,ssync-random,async-random")
    sp.add_argument("--seeds", type=int, default=20)
    sp.add_argument("--base-seed", type=int, default=0)
    sp.add_argument("--workers", type=int, default=None)
    sp.add_argument("--fairness-window", type=int, default=None)
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=cmd_campaign)

    sp = sub.add_parser("verify", help="re-check a trace file against every invariant")
    sp.add_argument("--trace", required=True)
    sp.add_argument("--scenario", default=None)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("replay", help="pretty-print a trace step by step")
    sp.add_argument("--trace", required=True)
    sp.add_argument("--scenario", default=None)
    sp.add_argument("--limit", type=int, default=None)
    sp.set_defaults(func=cmd_replay)

    sp = sub.add_parser("serve", help="start the local session service")
    sp.add_argument("--port", type=int, default=7341)
    sp.add_argument("--static", default=None, help="directory of console assets to serve")
    sp.set_defaults(func=cmd_serve)

    sp = sub.add_parser("generate", help="generate an admissible scenario")
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--box", type=int, default=30)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--kind", choices=("grid", "line"), default="grid")
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=cmd_generate)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ScenarioError as e:
        print(f"scenario error ({e.code}): {e}", file=sys.stderr)
        return 2
    except FileNotFoundError as e:
        print(f"file not found: {e.filename}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
