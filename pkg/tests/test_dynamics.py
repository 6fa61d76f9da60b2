from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from wilkshift.chart import MINUS, PLUS, ChartPoint, edges, phi
from wilkshift.dynamics import (CUBIC, ON_AXIS, QUADRATIC, UNDETERMINED, branch_step, classify,
                                det2, digits_needed, is_near_horizontal, jacobian, max_steps,
                                orbit, push_cone, rate_ratios, region_flags, signature, w_side,
                                wilkinson_map)
from wilkshift.errors import ConeViolation, PrecisionBudgetExceeded, WrongSide
from wilkshift.precision import PrecisionCtx
from wilkshift.signs import MINUS_FOREVER, PLUS_FOREVER, SignSeq
from wilkshift.tridiag import max_abs_diff, wilkinson_step

CTX = PrecisionCtx(150)
xs = st.fractions(Fraction(19, 10), Fraction(21, 10))
ys = st.fractions(Fraction(-1, 100), Fraction(1, 100))
points = st.builds(lambda x, y: ChartPoint(CTX.num(x), CTX.num(y)), xs, ys)


def P(x, y, ctx=CTX):
    return ChartPoint(ctx.num(x), ctx.num(y))


def test_branch_images_match_oracle(frozen):
    for case in frozen["w_steps"]:
        w, x1, y1 = branch_step(CTX.mp, case["side"], CTX.num(case["x"]), CTX.num(case["y"]))
        for got, want in ((w, case["w"]), (x1, case["X"]), (y1, case["Y"])):
            assert abs(got / CTX.num(want) - 1) < CTX.num("1e-28")


@given(points)
def test_map_agrees_with_matrix_wilkinson_step(p):
    if p.y == 0:
        return
    image, _ = wilkinson_map(p, CTX)
    assert max_abs_diff(wilkinson_step(phi(p, CTX), CTX), phi(image, CTX)) < 1000 * CTX.tol


@given(points)
def test_invariance_and_contraction(p):
    image, _ = wilkinson_map(p, CTX)
    e = edges(CTX)
    assert e.x_lo <= image.x <= e.x_hi
    assert 49 * abs(image.y) <= abs(p.y)
    assert image.y * p.y >= 0


def test_w_side_domains():
    with pytest.raises(WrongSide):
        w_side(PLUS, P("2.01", "0.001"), CTX)
    with pytest.raises(WrongSide):
        w_side(MINUS, P("1.99", "0.001"), CTX)
    with pytest.raises(WrongSide):
        w_side(PLUS, P("1.5", "0"), CTX)
    # both branches are defined on x = 2
    w_side(PLUS, P(2, "0.01"), CTX)
    w_side(MINUS, P(2, "0.01"), CTX)
    with pytest.raises(ValueError):
        w_side("*", P(2, "0.01"), CTX)


@given(points)
def test_jacobian_determinant_positive(p):
    if p.y == 0 or (p.x == 2 and p.y == 0):
        return
    side = PLUS if p.x <= 2 else MINUS
    assert det2(jacobian(side, p, CTX)) > 0


def test_jacobian_matches_finite_differences():
    p, h = P("1.97", "0.004"), CTX.num("1e-50")
    m = jacobian(PLUS, p, CTX)
    fx = [(u - v) / (2 * h) for u, v in zip(branch_step(CTX.mp, PLUS, p.x + h, p.y)[1:],
                                             branch_step(CTX.mp, PLUS, p.x - h, p.y)[1:])]
    fy = [(u - v) / (2 * h) for u, v in zip(branch_step(CTX.mp, PLUS, p.x, p.y + h)[1:],
                                             branch_step(CTX.mp, PLUS, p.x, p.y - h)[1:])]
    assert abs(m[0][0] - fx[0]) < CTX.num("1e-40") and abs(m[1][0] - fx[1]) < CTX.num("1e-40")
    assert abs(m[0][1] - fy[0]) < CTX.num("1e-40") and abs(m[1][1] - fy[1]) < CTX.num("1e-40")


def test_push_cone():
    v = (CTX.num(1), CTX.num("0.01"))
    w = push_cone(PLUS, P("1.96", "0.002"), v, CTX)
    assert is_near_horizontal(w)
    with pytest.raises(ValueError):
        push_cone(PLUS, P("1.96", "0.002"), (1, 1), CTX)


def test_push_cone_reports_violation_outside_rectangle():
    # far outside the rectangle the cone estimate is not available
    with pytest.raises(ConeViolation):
        push_cone(PLUS, P("0.5", "0.5"), (1, 0), CTX)


def test_precision_budget():
    assert digits_needed(3, 0) == 20
    assert digits_needed(2, "0.01") == 20 + 32
    assert max_steps("0.01", 300) == 5
    with pytest.raises(PrecisionBudgetExceeded) as info:
        orbit(P("2.05", "0.001"), 8, CTX)
    assert info.value.step == max_steps(CTX.num("0.001"), CTX.digits)


def test_orbit_escape_and_record():
    ctx = PrecisionCtx(500)
    rec = orbit(P("2", "0.01", ctx), 4, ctx)
    assert rec.sides[0] == PLUS
    assert rec.points[0] == P("2", "0.01", ctx)
    assert len(rec.points) == len(rec.regions) == rec.steps + 1
    assert rec.escape_step is not None and rec.escape_side == MINUS


def test_orbit_rejects_outside_and_bad_kmax():
    with pytest.raises(ValueError):
        orbit(P("2.3", "0.001"), 2, CTX)
    with pytest.raises(ValueError):
        orbit(P("2", "0.001"), 0, CTX)


def test_on_axis_is_fixed():
    rec = orbit(P("1.95", 0), 3, CTX)
    assert all(q.y == 0 for q in rec.points)
    assert classify(rec, CTX).kind == ON_AXIS


def test_cubic_classification():
    ctx = PrecisionCtx(1000)
    rec = orbit(P("2.05", "0.001", ctx), 5, ctx)
    cls = classify(rec, ctx)
    assert cls.kind == CUBIC and cls.witness_step == 0
    ratios = rate_ratios(rec, 3)
    assert all(2 * r > 1 for r in ratios)


def test_quadratic_candidate_and_undetermined():
    ctx = PrecisionCtx(600)
    from wilkshift.cantor import locate_point
    x, _ = locate_point("0.01", SignSeq.alternating(6), ctx, depth=6)
    rec = orbit(ChartPoint(x, ctx.num("0.01")), 5, ctx)
    assert classify(rec, ctx).kind == QUADRATIC
    rec = orbit(P("1.999", "0.01", ctx), 3, ctx, stop_at_escape=True)
    assert classify(rec, ctx).kind in (CUBIC, QUADRATIC, UNDETERMINED)


def test_signature_tails():
    ctx = PrecisionCtx(500)
    assert signature(P("1.92", "0.001", ctx), 3, ctx) == SignSeq("", PLUS_FOREVER)
    assert signature(P("2.05", "0.001", ctx), 3, ctx) == SignSeq("", MINUS_FOREVER)
    assert signature(P("2", "0.01", ctx), 3, ctx).tail == MINUS_FOREVER


def test_region_flags():
    rec = orbit(P("2", "0.01"), 1, CTX)
    assert region_flags(rec.regions[0]) == "R|X0|Y0|rv"
