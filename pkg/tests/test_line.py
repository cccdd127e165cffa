"""Line formation: election, embedding, the decision rule, and its movement properties."""

import itertools
import random

import pytest

from apf.line import (
    LineConfiguration,
    LineError,
    LineMove,
    LineTargetEmbedding,
    apf_line_decide,
    decide_all,
    embed_target_line,
    endpoint_string,
    line_elect,
)


def lc(*positions):
    return LineConfiguration.from_positions(positions)


class TestElection:
    # The origin goes to the endpoint whose string is lexicographically
    # larger, mirroring the grid's leading-corner rule; the movement rules
    # (tail extending outward keeps its end smaller, inner robots moving
    # toward the head grow the head's string) only hold this way round.
    def test_basic(self):
        el = line_elect(lc(0, 1, 3))
        assert (el.origin, el.direction, el.head, el.tail) == (0, 1, 0, 3)

    def test_mirrored(self):
        el = line_elect(lc(0, 2, 3))
        assert (el.origin, el.direction, el.head, el.tail) == (3, -1, 3, 0)

    def test_palindrome_rejected(self):
        with pytest.raises(LineError) as e:
            line_elect(lc(0, 1, 2))
        assert e.value.code == "line-symmetric"

    def test_strings(self):
        assert endpoint_string((0, 1, 3), 0, 1) == "1101"
        assert endpoint_string((0, 1, 3), 3, -1) == "1011"


class TestEmbedding:
    def test_asymmetric_anchors_larger_end(self):
        emb = embed_target_line([5, 6, 8], 3)
        assert emb.targets == (0, 1, 3)
        assert emb.t_target == 3 and emb.head_anchor == 0

    def test_symmetric(self):
        assert embed_target_line([0, 1, 2], 3).targets == (0, 1, 2)
        assert embed_target_line([10, 11, 13, 14], 4).targets == (0, 1, 3, 4)

    def test_size_mismatch(self):
        with pytest.raises(LineError):
            embed_target_line([0, 1], 3)

    def test_reflection_invariant(self):
        rng = random.Random(2)
        for _ in range(50):
            pts = sorted(rng.sample(range(12), rng.randint(3, 6)))
            a = embed_target_line(pts, len(pts))
            b = embed_target_line([20 - p for p in pts], len(pts))
            assert a.targets == b.targets


class TestDecide:
    def test_formed_fixed_point(self):
        emb = embed_target_line([0, 1, 3], 3)
        for p in (0, 1, 3):
            assert apf_line_decide(p, lc(0, 1, 3), emb) is LineMove.STAY

    def test_formed_up_to_reflection(self):
        emb = LineTargetEmbedding((0, 1, 3))
        for p in (0, 2, 3):
            assert apf_line_decide(p, lc(0, 2, 3), emb) is LineMove.STAY

    def test_tail_walks_out(self):
        # All inner robots placed, far target beyond the tail: only the tail
        # moves, extending the segment.
        emb = LineTargetEmbedding((0, 1, 4))
        moves = decide_all(lc(0, 1, 3), emb)
        assert moves[(3)][0] is LineMove.RIGHT and moves[3][1] == 4
        assert moves[0][0] is LineMove.STAY and moves[1][0] is LineMove.STAY

    def test_inner_left_move(self):
        # Inner robot left of its slot with a free neighbor steps toward the
        # head; everyone else holds.
        emb = LineTargetEmbedding((0, 1, 5))
        moves = decide_all(lc(0, 2, 5), emb)
        assert moves[2][0] is LineMove.LEFT and moves[2][1] == 1
        assert moves[0][0] is LineMove.STAY and moves[5][0] is LineMove.STAY

    def test_right_moves_flow_when_no_left_need(self):
        emb = LineTargetEmbedding((0, 2, 4, 6))
        moves = decide_all(lc(0, 1, 2, 6), emb)
        # both inner targets are to the right; the robot with a free right
        # neighbor moves, the other waits
        assert moves[1][0] is LineMove.STAY
        assert moves[2][0] is LineMove.RIGHT

    def test_left_need_blocks_right_moves(self):
        emb = LineTargetEmbedding((0, 2, 3, 6))
        moves = decide_all(lc(0, 1, 4, 6), emb)
        # the robot at 4 needs a left move, so the robot at 1 may not go right
        assert moves[4][0] is LineMove.LEFT
        assert moves[1][0] is LineMove.STAY

    def test_blocked_neighbor_stalls(self):
        emb = LineTargetEmbedding((0, 1, 2, 6))
        moves = decide_all(lc(0, 2, 3, 6), emb)
        # inner at 2 wants 1 (free) -> moves; inner at 3 wants 2 (occupied) -> stays
        assert moves[2][0] is LineMove.LEFT
        assert moves[3][0] is LineMove.STAY

    def test_symmetric_snapshot_rejected(self):
        emb = LineTargetEmbedding((0, 1, 4))
        with pytest.raises(LineError) as e:
            apf_line_decide(1, lc(0, 1, 2), emb)
        assert e.value.code == "line-symmetric"

    def test_head_never_moves_across_instances(self):
        rng = random.Random(9)
        for _ in range(80):
            pts = sorted(rng.sample(range(10), rng.randint(3, 5)))
            try:
                el = line_elect(lc(*pts))
            except LineError:
                continue
            tgt = embed_target_line(sorted(rng.sample(range(10), len(pts))), len(pts))
            moves = decide_all(lc(*pts), tgt)
            assert moves[el.head][0] is LineMove.STAY


def string_pair(positions):
    lo, hi = min(positions), max(positions)
    return endpoint_string(tuple(sorted(positions)), lo, 1), endpoint_string(
        tuple(sorted(positions)), hi, -1
    )


class TestMovementProperties:
    def test_inner_move_toward_an_end_orders_strings(self):
        # Moving an inner robot one node toward end A strictly grows A's
        # string and strictly shrinks the other end's.
        rng = random.Random(4)
        checked = 0
        while checked < 200:
            pts = sorted(rng.sample(range(12), rng.randint(3, 6)))
            inner = [p for p in pts[1:-1]]
            movable = [p for p in inner if p - 1 not in pts]
            if not movable:
                continue
            p = rng.choice(movable)
            new = sorted(set(pts) - {p} | {p - 1})
            if min(new) != min(pts) or max(new) != max(pts):
                continue
            a_old, b_old = string_pair(pts)
            a_new, b_new = string_pair(new)
            assert a_new > a_old
            assert b_new < b_old
            checked += 1

    def test_smaller_end_moving_out_stays_smaller(self):
        rng = random.Random(8)
        checked = 0
        while checked < 200:
            pts = sorted(rng.sample(range(12), rng.randint(3, 6)))
            a, b = string_pair(pts)
            if a == b:
                continue
            if b <= a:
                moved = sorted(pts[:-1] + [pts[-1] + 1])
            else:
                moved = sorted([pts[0] - 1] + pts[1:])
            a2, b2 = string_pair(moved)
            low_is_smaller_after = (b2 < a2) if b <= a else (a2 < b2)
            assert low_is_smaller_after
            checked += 1

    def test_moves_preserve_election(self):
        # After every move the decision rule emits, the configuration stays
        # electable and head/tail keep their identities (unless formed).
        rng = random.Random(6)
        for trial in range(60):
            pts = sorted(rng.sample(range(9), rng.randint(3, 5)))
            try:
                el = line_elect(lc(*pts))
            except LineError:
                continue
            tgt = embed_target_line(sorted(rng.sample(range(9), len(pts))), len(pts))
            cur = set(pts)
            for _ in range(80):
                moves = decide_all(lc(*sorted(cur)), tgt)
                movers = {p: d for p, (mv, d) in moves.items() if d is not None}
                if not movers:
                    break
                p, d = sorted(movers.items())[trial % len(movers)]
                cur = set(cur) - {p} | {d}
                new_moves = decide_all(lc(*sorted(cur)), tgt)
                if all(mv is LineMove.STAY for mv, _ in new_moves.values()):
                    break
                el2 = line_elect(lc(*sorted(cur)))
                if p == el.tail:
                    el = el2  # the tail may have moved; roles persist
                    continue
                assert el2.head == el.head
            else:
                pytest.fail("no fixed point reached")
