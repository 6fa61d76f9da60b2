import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from wilkshift.cantor import (box_count_line, cover_2d, cover_heights, depth_cap, digits_for_depth,
                              gap_table, interval_table, interval_tree, itinerary, line_cover,
                              line_cover_depth, lipschitz_check, locate, locate_gap, locate_point,
                              plane_cover_depth, random_sequence, sandwich_bounds,
                              separation_check)
from wilkshift.chart import ChartPoint, edges
from wilkshift.errors import PrecisionBudgetExceeded
from wilkshift.precision import PrecisionCtx
from wilkshift.signs import PLUS_FOREVER, SignSeq, all_strings

CTX = PrecisionCtx(300)
Y = CTX.num("0.01")
TREE = interval_tree(Y, 3, CTX)
words3 = st.text(alphabet="+-", min_size=3, max_size=3)


def test_depth_zero_is_the_wedge_section():
    b = TREE[""]
    e = edges(CTX)
    # I_0 is the section of the closed wedge: |x - 2| <= 10|y|
    assert abs(b.lo - (2 - 10 * Y)) < 1e-10 and abs(b.hi - (2 + 10 * Y)) < 1e-10
    assert e.x_lo <= b.outer_lo <= b.lo and b.hi <= b.outer_hi <= e.x_hi


def test_tree_is_nested_and_ordered():
    for k in range(1, 4):
        row = [TREE[t] for t in all_strings(k)]
        for left, right in zip(row, row[1:]):
            assert left.outer_hi <= right.outer_lo
        for tau in all_strings(k):
            parent, child = TREE[tau[:-1]], TREE[tau]
            assert parent.outer_lo <= child.outer_lo and child.outer_hi <= parent.outer_hi


@given(words3)
@settings(max_examples=8)
def test_midpoints_follow_their_itinerary(tau):
    b = TREE[tau]
    sig = itinerary(ChartPoint(b.mid, Y), 3, CTX)
    assert sig.take(3) == tau


def test_reflection_symmetry():
    a = locate(Y, SignSeq("+-"), 2, CTX)
    b = locate(-Y, SignSeq("+-"), 2, CTX)
    assert abs(a.lo - b.lo) < 1e-30 and abs(a.hi - b.hi) < 1e-30


@pytest.mark.parametrize("n", [1, 2, 3])
def test_widths_inside_sandwich(n):
    lower, upper = sandwich_bounds(Y, n, CTX)
    for tau in all_strings(n):
        b = TREE[tau]
        assert lower < b.width and b.outer_width < upper


def test_gaps_sit_inside_their_intervals():
    gaps = gap_table(Y, {t: TREE[t] for t in all_strings(2)}, CTX)
    for tau, g in gaps.items():
        b = TREE[tau]
        assert b.outer_lo <= g.outer_lo and g.outer_hi <= b.outer_hi
        assert g.width > 0
    single = locate_gap(Y, "+-", CTX)
    assert abs(single.mid - gaps["+-"].mid) < 1e-20


def test_interval_table_keys():
    table = interval_table(Y, 2, CTX)
    assert list(table) == all_strings(2)


def test_axis_collapses_to_t_x():
    b = locate(0, SignSeq("+-"), 2, CTX)
    assert abs(b.mid - 2) <= CTX.tol


def test_depth_cap_and_budget():
    assert depth_cap(Y, 300) == 5
    assert digits_for_depth(Y, 5) == 256 + 11
    with pytest.raises(PrecisionBudgetExceeded):
        locate(Y, SignSeq("+-+-+-"), 6, CTX)


def test_locate_point_uses_affordable_depth():
    x, b = locate_point("0.01", "+-(+)", CTX)
    assert b.depth == depth_cap(Y, CTX.digits) and b.lo <= x <= b.hi


def test_cover_depths():
    assert line_cover_depth(Fraction(1, 2)) == 1
    assert line_cover_depth(Fraction(1, 16)) == 3
    assert line_cover_depth(Fraction(1, 2**16)) == 5
    assert plane_cover_depth(Fraction(1, 8)) == 4
    with pytest.raises(ValueError):
        line_cover_depth(1)


def test_line_cover_counts():
    cover = line_cover("0.01", Fraction(1, 16), CTX)
    assert cover.n == 3 and cover.count == 8 and cover.bound == 16
    assert set(cover.centers) == set(all_strings(3))
    count, bound = box_count_line("0.005", Fraction(1, 2), CTX)
    assert count <= bound == 4
    with pytest.raises(ValueError):
        line_cover(0, Fraction(1, 2), CTX)


def test_cover_heights():
    hs = cover_heights(2)
    assert hs == (Fraction(-3, 400), Fraction(-1, 400), Fraction(1, 400), Fraction(3, 400))


def test_cover_2d_half():
    cover = cover_2d(Fraction(1, 2), CTX, full=True)
    assert (cover.n, cover.m, cover.count) == (2, 2, 16)
    assert cover.count <= cover.bound


def test_separation_and_lipschitz():
    ok, gap, span, lower, upper = separation_check(Y, "+-+(+)", "+--(+)", CTX)
    assert ok and lower < gap < span < upper
    ok, worst, limit = lipschitz_check("+-(+)", "0.01", "0.008", CTX, depth=3)
    assert ok and worst <= limit
    with pytest.raises(ValueError):
        separation_check(Y, "+-", "+-", CTX)


def test_random_sequence_is_reproducible():
    a = random_sequence(random.Random(3), 6)
    b = random_sequence(random.Random(3), 6)
    assert a == b and len(a) == 6


def test_itinerary_tail():
    sig = itinerary(ChartPoint(CTX.num("1.92"), Y), 4, CTX)
    assert sig == SignSeq("", PLUS_FOREVER)
