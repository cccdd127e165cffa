"""The stale-snapshot adversary: delayed landings, discarded looks, formation anyway.

Run:  python demos/04_adversary_stress.py
"""

from apf.runner import run_one
from apf.scenario import generate_scenario


def main():
    sc = generate_scenario(7, 14, 21)
    print("robots:", list(sc.robots))
    print("target:", list(sc.target))

    for policy in ("fsync", "async-random", "async-greedy-split", "async-stale"):
        out = run_one(sc, policy, 4)
        mr = out.metrics
        print(f"\n{policy:>18}: {out.verdict} in {mr.events} events, "
              f"{mr.moves_total} moves, {mr.discards} discarded snapshots")
        assert out.verdict == "formed" and not out.reports

    print("\nthe stale adversary activates every other robot while a mover is "
          "on its edge,\nso each of those looks sees the edge and is discarded, "
          "yet the pattern still forms.")


if __name__ == "__main__":
    main()
