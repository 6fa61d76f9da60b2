from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from wilkshift.chart import ChartPoint, phi
from wilkshift.errors import ShiftIsEigenvalue
from wilkshift.precision import PrecisionCtx
from wilkshift.tridiag import (T_X, SymTridiagonal3, bottom_block_eigs, is_unreduced,
                               max_abs_diff, qr_decompose, shifted_step, shifted_step_full,
                               spectrum_residual, wilkinson_shift, wilkinson_step)

CTX = PrecisionCtx(120)
coords = st.tuples(st.fractions(Fraction(19, 10), Fraction(21, 10)),
                   st.fractions(Fraction(-1, 100), Fraction(1, 100)))
shifts = st.fractions(Fraction(-1, 50), Fraction(1, 50))


def matmul(a, b):
    return [[sum(a[i][k] * b[k][j] for k in range(3)) for j in range(3)] for i in range(3)]


def closed_form_qr(s, ctx):
    s = ctx.num(s)
    s1 = 1 / ctx.mp.sqrt(1 + s * s)
    sgn = 1 if s > 0 else -1
    q = [[-s * s1, s1, 0], [s1, s * s1, 0], [0, 0, -sgn]]
    r = [[1 / s1, -2 * s * s1, 0], [0, (1 - s * s) * s1, 0], [0, 0, abs(s)]]
    return q, r


@pytest.mark.parametrize("s", [Fraction(1, 2), Fraction(-1, 2), Fraction(1, 10), Fraction(-1, 10)])
def test_qr_of_shifted_t_x_matches_closed_form(s, ctx100):
    m = T_X.coerce(ctx100)
    shifted = SymTridiagonal3(m.d1 - s, m.d2 - s, m.d3 - s, m.e1, m.e2).to_matrix()
    f = qr_decompose(shifted, ctx100)
    q, r = closed_form_qr(s, ctx100)
    for i in range(3):
        for j in range(3):
            assert abs(f.q[i][j] - q[i][j]) < ctx100.num("1e-40")
            assert abs(f.r[i][j] - r[i][j]) < ctx100.num("1e-40")


@given(st.lists(st.fractions(-2, 2, max_denominator=1000), min_size=9, max_size=9))
def test_qr_reconstructs_and_is_orthogonal(vals):
    m = [vals[0:3], vals[3:6], vals[6:9]]
    f = qr_decompose(m, CTX)
    prod = matmul(f.q, f.r)
    qtq = matmul([list(c) for c in zip(*f.q)], f.q)
    for i in range(3):
        assert f.r[i][i] >= 0
        for j in range(3):
            assert abs(prod[i][j] - CTX.num(m[i][j])) < 100 * CTX.tol
            assert abs(qtq[i][j] - (1 if i == j else 0)) < 100 * CTX.tol
            if i > j:
                assert f.r[i][j] == 0


@given(coords, shifts)
def test_shifted_step_is_isospectral_and_tridiagonal(p, s):
    t = phi(ChartPoint(*p), CTX)
    full = shifted_step_full(s, t, CTX, extend=True)
    assert abs(full[0][2]) < 100 * CTX.tol and abs(full[2][0]) < 100 * CTX.tol
    assert spectrum_residual(shifted_step(s, t, CTX, extend=True)) < 100 * CTX.tol


def test_shift_at_eigenvalue_raises_unless_extended():
    t = T_X.coerce(CTX)
    with pytest.raises(ShiftIsEigenvalue):
        shifted_step(0, t, CTX)
    assert spectrum_residual(shifted_step(0, t, CTX, extend=True)) < CTX.tol


def test_matrix_step_matches_oracle(frozen):
    tol = CTX.num("1e-28")
    for case in frozen["matrix_steps"]:
        t = phi(ChartPoint(CTX.num(case["x"]), CTX.num(case["y"])), CTX)
        t1 = shifted_step(Fraction(case["s"]), t, CTX)
        for got, want in zip((t1.d1, t1.d2, t1.d3, t1.e1, t1.e2), case["d"] + case["e"]):
            assert abs(got - CTX.num(want)) < tol


def test_bottom_block_and_wilkinson_shift(frozen):
    for case in frozen["sub_eigs"]:
        t = phi(ChartPoint(CTX.num(case["x"]), CTX.num(case["y"])), CTX)
        pair = bottom_block_eigs(t, CTX)
        assert abs(pair.lo / CTX.num(case["lo"]) - 1) < CTX.num("1e-28")
        assert abs(pair.hi / CTX.num(case["hi"]) - 1) < CTX.num("1e-28")
        gap = abs(t.d3 - pair.lo) - abs(t.d3 - pair.hi)
        want = pair.hi if gap >= -CTX.tol else pair.lo  # ties go to the larger root
        assert wilkinson_shift(t, CTX) == want


def test_wilkinson_step_preserves_spectrum():
    t = phi(ChartPoint(CTX.num("1.97"), CTX.num("0.004")), CTX)
    for _ in range(3):
        t = wilkinson_step(t, CTX)
        assert spectrum_residual(t) < 1000 * CTX.tol


def test_helpers():
    t = T_X.coerce(CTX)
    assert not is_unreduced(t)
    assert max_abs_diff(t, t) == 0
    assert spectrum_residual(t) == 0
    m = t.to_matrix()
    assert SymTridiagonal3.from_matrix(m) == t
