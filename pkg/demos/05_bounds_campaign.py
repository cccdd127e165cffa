"""A miniature campaign: formation rate plus observed space and move extremes.

Run:  python demos/05_bounds_campaign.py
"""

from apf.runner import campaign, generate_scenarios


def main():
    scenarios = generate_scenarios(40, (3, 12), 20, base_seed=100)
    summary = campaign(scenarios, ["fsync", "ssync-random", "async-random"],
                       seeds=[0, 1, 2], workers=1)
    doc = summary.to_dict()
    print(f"runs: {doc['runs']}, formed: {doc['formed']}, "
          f"verifier reports: {doc['verifier_reports']}")
    for pol, st in sorted(doc["per_policy"].items()):
        print(f"   {pol:>16}: {st['formed']}/{st['runs']}")
    print(f"max space margin over runs (square side minus its D+4 cap): "
          f"{doc['max_space_margin']}")
    print(f"observed move maxima: head {doc['max_moves']['head']}, "
          f"inner {doc['max_moves']['inner']}, tail {doc['max_moves']['tail']}")
    print(f"worst total moves over k*D: {doc['max_moves']['total_over_kD']}")
    print(f"wall: {doc['wall_seconds']}s")


if __name__ == "__main__":
    main()
