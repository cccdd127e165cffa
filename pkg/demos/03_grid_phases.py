"""A full grid run: phases, conditions, and the moves they prescribe.

Run:  python demos/03_grid_phases.py
"""

from apf.runner import run_one
from apf.scenario import generate_scenario
from apf.verify import compute_metrics


def main():
    sc = generate_scenario(6, 12, 5)
    print("robots:", list(sc.robots))
    print("target:", list(sc.target))
    out = run_one(sc, "fsync", 0)
    print(f"\nverdict: {out.verdict} after {out.metrics.events} events, "
          f"{out.metrics.moves_total} moves\n")

    print("phase history, one line per still configuration with new conditions:")
    last = None
    for rec in out.trace:
        if rec["ev"] != "activate" or rec["phase"] is None:
            continue
        key = (rec["phase"], rec["conds"])
        if key == last:
            continue
        last = key
        c = rec["conds"]
        true_flags = ",".join(f"c{i}" for i, b in enumerate(c) if b == "1")
        print(f"   t={rec['t']:5d}  phase {rec['phase']:>4}  [{true_flags}]")

    mr = out.metrics
    print(f"\nspace: square {mr.space_square} of allowed {mr.D + 4}; "
          f"rectangle {mr.space_rect} of allowed ({mr.M + 4}, {mr.N + 1})")
    print(f"moves per role: {mr.moves_per_role} "
          f"(bounds: head {mr.D}, inner {2 * mr.D}, tail {6 * mr.D + 12})")


if __name__ == "__main__":
    main()
