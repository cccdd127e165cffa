"""Watch the line algorithm close a pattern, one still configuration at a time.

Run:  python demos/02_line_formation.py
"""

from apf.line import LineConfiguration, LineMove, decide_all, embed_target_line


def render(positions, lo, hi, marks=()):
    cells = []
    for x in range(lo, hi + 1):
        if x in positions:
            cells.append("O")
        elif x in marks:
            cells.append("x")
        else:
            cells.append(".")
    return "".join(cells)


def run(positions, target):
    k = len(positions)
    emb = embed_target_line(target, k)
    print(f"robots  {sorted(positions)}   target {sorted(target)} "
          f"(normalized {list(emb.targets)})")
    cur = set(positions)
    lo = min(min(cur), 0) - 1
    hi = max(max(cur), max(target)) + 2
    for step in range(200):
        cfg = LineConfiguration.from_positions(cur)
        moves = decide_all(cfg, emb)
        movers = {p: d for p, (mv, d) in moves.items() if d is not None}
        print(f"{step:3d}  {render(cur, lo, hi, marks=set(emb.targets))}"
              + (f"   moves: {movers}" if movers else "   formed"))
        if not movers:
            break
        for p, d in movers.items():
            cur.discard(p)
            cur.add(d)


if __name__ == "__main__":
    print("=== inner robots pack up behind the head, then the tail parks ===")
    run([0, 3, 5, 9], [0, 1, 2, 6])
    print()
    print("=== the tail stretches the segment rightward first ===")
    run([0, 1, 3], [0, 1, 6])
