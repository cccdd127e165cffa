"""Corner strings, symmetry classification, and frame election, step by step.

Run:  python demos/01_corner_strings_and_election.py
"""

from apf import (
    Configuration,
    bounding_rect,
    candidate_strings,
    classify_symmetry,
    corner_string,
    elect_frame,
    brute_force_symmetry,
)


def show(points):
    cfg = Configuration.from_points(points)
    rect = bounding_rect(cfg)
    print(f"\nrobots: {sorted(cfg.nodes)}")
    print(f"bounding rectangle: x [{rect.min_x}, {rect.max_x}], "
          f"y [{rect.min_y}, {rect.max_y}]  ({rect.m} x {rect.n} grid points)")

    # Render the occupancy with the serpentine scan order of one corner.
    order = {}
    s = corner_string(cfg, rect, (rect.min_x, rect.min_y), (1, 0)) \
        if rect.width > 1 else None
    for y in range(rect.max_y, rect.min_y - 1, -1):
        row = ""
        for x in range(rect.min_x, rect.max_x + 1):
            row += "#" if (x, y) in cfg.nodes else "."
        print(f"   {row}")
    if s:
        print(f"string from the lower-left corner, scanning right: {s.bits}")

    print("all candidate strings:")
    for corner, side, bls in candidate_strings(cfg):
        print(f"   corner {corner}, first side toward {side}: {bls.bits}")

    cls = classify_symmetry(cfg)
    print(f"classification: {cls.kind}  (full class: {list(cls.all_kinds) or 'none'})")
    assert cls.kind == brute_force_symmetry(cfg).kind

    if cls.is_asymmetric:
        el = elect_frame(cfg)
        print(f"elected frame: origin {el.frame.origin}, x axis {el.frame.x_dir}, "
              f"y axis {el.frame.y_dir}")
        print(f"head robot at {el.head}, tail robot at {el.tail}")
    else:
        print("no unique leader: a robot-swapping symmetry ties the strings")


if __name__ == "__main__":
    print("=== an asymmetric hook shape ===")
    show([(0, 0), (1, 0), (0, 2)])

    print("\n=== a mirrored vee: vertical-axis symmetry ===")
    show([(0, 0), (2, 0), (1, 1)])

    print("\n=== the full 2x2 block: quarter-turn symmetry ===")
    show([(0, 0), (1, 0), (0, 1), (1, 1)])

    print("\n=== a vertical line: electable despite the axis through it ===")
    show([(0, 0), (0, 1), (0, 3)])
