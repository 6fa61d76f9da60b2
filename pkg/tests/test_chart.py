from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from wilkshift.chart import (A_MAX, MINUS, PLUS, ChartPoint, check_a, check_b,
                             classify_region, coordinate_step, edges, leading_minors,
                             lu_positive_q, omega, omega_cone, omega_partials, omega_pm, phi,
                             phi_inverse, side_of)
from wilkshift.errors import AtConePoint, ChartDomainError
from wilkshift.precision import PrecisionCtx
from wilkshift.tridiag import (SymTridiagonal3, max_abs_diff, shifted_step, spectrum_residual)

CTX = PrecisionCtx(150)
xs = st.fractions(Fraction(19, 10), Fraction(21, 10))
ys = st.fractions(Fraction(-1, 100), Fraction(1, 100))
points = st.builds(lambda x, y: ChartPoint(CTX.num(x), CTX.num(y)), xs, ys)


def matmul(a, b):
    return [[sum(a[i][k] * b[k][j] for k in range(3)) for j in range(3)] for i in range(3)]


def test_phi_of_t_x_point():
    t = phi(ChartPoint(2, 0), CTX)
    want = (0, 0, 0, 1, 0)
    assert all(abs(u - v) < CTX.tol for u, v in zip(t.entries(), want))


def test_phi_spectrum_matches_oracle(frozen):
    for case in frozen["spectra"]:
        t = phi(ChartPoint(CTX.num(case["x"]), CTX.num(case["y"])), CTX)
        assert spectrum_residual(t) < 100 * CTX.tol
        assert [abs(CTX.num(e) - l) < CTX.num("1e-28") for e, l in zip(case["eigs"], (-1, 0, 1))]


@given(points)
def test_phi_is_isospectral_and_unreduced(p):
    t = phi(p, CTX)
    assert spectrum_residual(t) < 100 * CTX.tol
    assert t.e1 > 0
    assert (t.e2 > 0) == (p.y > 0)


@given(points)
def test_q_is_lu_positive_and_diagonalizes(p):
    q = lu_positive_q(p, CTX)
    assert all(m > 0 for m in leading_minors(q))
    qt = [list(c) for c in zip(*q)]
    lam = [[1, 0, 0], [0, -1, 0], [0, 0, 0]]
    m = matmul(qt, matmul(lam, q))
    t = phi(p, CTX).to_matrix()
    assert all(abs(m[i][j] - t[i][j]) < 100 * CTX.tol for i in range(3) for j in range(3))


@given(points)
def test_chart_round_trip(p):
    back = phi_inverse(phi(p, CTX), CTX)
    assert abs(back.x - p.x) < 100 * CTX.tol and abs(back.y - p.y) < 100 * CTX.tol


def test_phi_inverse_rejects_degenerate():
    bad = SymTridiagonal3(0, 0, 0, 0, 0)
    with pytest.raises(ChartDomainError):
        phi_inverse(bad, CTX)


def test_sub_eigenvalues_match_oracle(frozen):
    for case in frozen["sub_eigs"]:
        pair = omega_pm(ChartPoint(CTX.num(case["x"]), CTX.num(case["y"])), CTX)
        assert abs(pair.lo / CTX.num(case["lo"]) - 1) < CTX.num("1e-28")
        assert abs(pair.hi / CTX.num(case["hi"]) - 1) < CTX.num("1e-28")


def test_omega_selects_by_side():
    p, q = ChartPoint(CTX.num(2), CTX.num("0.01")), ChartPoint(CTX.num("2.05"), CTX.num("0.001"))
    assert omega(p, CTX) == omega_pm(p, CTX).hi
    assert omega(q, CTX) == omega_pm(q, CTX).lo


@given(points)
def test_sub_eigenvalue_bounds_and_cone(p):
    pair = omega_pm(p, CTX)
    assert pair.lo <= 0 <= pair.hi
    cone = omega_cone(p, CTX)
    scale = abs(p.x - 2) + abs(p.y)
    assert abs(pair.lo - cone.lo) <= scale * scale
    assert abs(pair.hi - cone.hi) <= scale * scale


@given(points)
def test_partials_match_central_differences(p):
    if abs(p.x - 2) + abs(p.y) < CTX.num("1e-6"):
        return
    h = CTX.num("1e-60")
    (mx, my), (px, py) = omega_partials(p, CTX)
    dx = [(u - v) / (2 * h) for u, v in zip(omega_pm(ChartPoint(p.x + h, p.y), CTX).__dict__.values(),
                                              omega_pm(ChartPoint(p.x - h, p.y), CTX).__dict__.values())]
    dy = [(u - v) / (2 * h) for u, v in zip(omega_pm(ChartPoint(p.x, p.y + h), CTX).__dict__.values(),
                                              omega_pm(ChartPoint(p.x, p.y - h), CTX).__dict__.values())]
    for got, want in ((mx, dx[0]), (px, dx[1]), (my, dy[0]), (py, dy[1])):
        assert abs(got - want) <= CTX.num("1e-40") * (1 + abs(want))


def test_partials_raise_at_cone_point():
    with pytest.raises(AtConePoint):
        omega_partials(ChartPoint(2, 0), CTX)


@given(points, st.fractions(Fraction(-1, 50), Fraction(1, 50)).filter(lambda s: s != 0))
def test_step_commutes_with_chart(p, s):
    lhs = shifted_step(s, phi(p, CTX), CTX)
    rhs = phi(coordinate_step(s, p, CTX), CTX)
    assert max_abs_diff(lhs, rhs) < 100 * CTX.tol


def test_coordinate_step_at_zero_shift():
    p = ChartPoint(CTX.num("1.95"), CTX.num("0.003"))
    q = coordinate_step(0, p, CTX)
    assert q.x == p.x and q.y == 0


def test_edges_are_exact_and_corners_on_triangles():
    e = edges(CTX)
    assert e.x_lo + 10 * e.y_max == 2 and e.x_hi - 10 * e.y_max == 2
    assert e.d_plus == 2 and e.d_minus == 2
    e2 = edges(CTX, Fraction(1, 20), Fraction(1, 80))
    assert abs(e2.d_plus - CTX.num(Fraction(159, 80))) < CTX.tol


def test_parameter_validation():
    assert check_a("1/10") == A_MAX
    for bad in ("0", "1/5"):
        with pytest.raises(ValueError):
            check_a(bad)
    with pytest.raises(ValueError):
        check_b(Fraction(1, 10), A_MAX)


@pytest.mark.parametrize("x,y,wedge,y0,d", [
    ("2", "0.01", True, True, None),
    ("2", "0", True, False, PLUS),
    ("2.05", "0.001", False, False, MINUS),
    ("1.999", "0.01", True, False, None),
    ("2.0005", "0.001", True, False, None),
])
def test_classify_region(x, y, wedge, y0, d):
    lab = classify_region(ChartPoint(CTX.num(x), CTX.num(y)), A_MAX, 0, CTX)
    assert lab.in_rect
    assert (lab.in_wedge_X0, lab.in_Y0, lab.in_D0) == (wedge, y0, d)
    assert lab.side == side_of(CTX.num(x))


def test_corners_belong_to_wedge_and_triangles():
    e = edges(CTX)
    for x, y, d in ((e.x_lo, e.y_max, PLUS), (e.x_hi, -e.y_max, MINUS)):
        lab = classify_region(ChartPoint(x, y), A_MAX, 0, CTX)
        assert lab.in_rect and lab.in_wedge_X0 and lab.in_D0 == d and not lab.in_Y0


def test_dyadic_boundary_point_is_in_wedge_and_triangle():
    # 10 y = x - 2 holds exactly in binary, so the shared closed edge is hit exactly
    lab = classify_region(ChartPoint(CTX.num("2.0390625"), CTX.num("0.00390625")), A_MAX, 0, CTX)
    assert lab.in_wedge_X0 and lab.in_D0 == MINUS and not lab.in_Y0


def test_outside_rectangle():
    lab = classify_region(ChartPoint(CTX.num("2.2"), CTX.num(0)), A_MAX, 0, CTX)
    assert not lab.in_rect and not lab.in_wedge_X0
