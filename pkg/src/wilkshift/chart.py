"""Bidiagonal (x, y) coordinates on the isospectral set near T_X.

``phi(2, 0) = T_X``. In these coordinates an s-step is the product map
``(x, y) -> ((1+s)/(1-s) x, |s|/(1+s) y)``, the sub-eigenvalues are the
roots of ``r1^2 w^2 + (4 - x^2) w - 4 x^2 y^2``, and the Wilkinson shift
picks the larger root for ``x <= 2`` and the smaller one for ``x > 2``.

Region predicates (:func:`classify_region`) compare the stored binary
values exactly. The scalar parameters ``a`` and ``b`` are exact rationals.
The top edge ``a/10`` and the points ``2 -+ b`` are rounded once to the
working precision, the same rounding a decimal input string gets, so
``y = 0.01`` parses onto the top edge of the default rectangle. The side
edges are then set to ``2 -+ 10 (a/10)`` exactly, which keeps the corners
of the rectangle on the triangle edges.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product

from .errors import AtConePoint, ChartDomainError
from .precision import PrecisionCtx, as_fraction, infer_ctx
from .tridiag import SubEigPair, SymTridiagonal3

A_MAX = Fraction(1, 10)
PLUS, MINUS = "+", "-"


@dataclass(frozen=True)
class ChartPoint:
    x: object
    y: object

    def coerce(self, ctx: PrecisionCtx) -> ChartPoint:
        return ChartPoint(ctx.num(self.x), ctx.num(self.y))

    def r1(self, ctx: PrecisionCtx):
        x, y = ctx.num(self.x), ctx.num(self.y)
        return ctx.mp.sqrt(4 + x * x + 4 * x * x * y * y)

    def r2(self, ctx: PrecisionCtx):
        x, y = ctx.num(self.x), ctx.num(self.y)
        return ctx.mp.sqrt(4 + 4 * y * y + x * x * y * y)

    def reflect(self) -> ChartPoint:
        return ChartPoint(self.x, -self.y)


P_X = ChartPoint(2, 0)


def check_a(a) -> Fraction:
    a = as_fraction(a)
    if not 0 < a <= A_MAX:
        raise ValueError(f"a must satisfy 0 < a <= 1/10, got {a}")
    return a


def check_b(b, a: Fraction) -> Fraction:
    b = as_fraction(b)
    if not 0 <= b < a:
        raise ValueError(f"b must satisfy 0 <= b < a, got {b}")
    return b


@dataclass(frozen=True)
class Edges:
    """Region edges for one (a, b) pair, rounded to a working precision."""

    x_lo: object  # 2 - a
    x_hi: object  # 2 + a
    y_max: object  # a/10
    d_plus: object  # 2 - b
    d_minus: object  # 2 + b


@lru_cache(maxsize=256)
def _edges(a: Fraction, b: Fraction, digits: int, guard: int) -> Edges:
    ctx = PrecisionCtx(digits, guard)
    mp, num = ctx.mp, ctx.num
    y_max = num(a / 10)
    # side edges are derived from the rounded top edge, so the corners
    # (2 -+ a, +-a/10) lie exactly on the triangle edges x = 2 -+ 10|y|
    half = mp.fmul(y_max, 10, exact=True)
    return Edges(mp.fsub(2, half, exact=True), mp.fadd(2, half, exact=True), y_max,
                 num(2 - b), num(2 + b))


def edges(ctx: PrecisionCtx, a=A_MAX, b=0) -> Edges:
    a = check_a(a)
    return _edges(a, check_b(b, a), ctx.digits, ctx.guard)


def exact_abs(mp, v):
    """``|v|`` without rounding (plain ``abs`` rounds to the working precision)."""
    return v if v >= 0 else mp.fsub(0, v, exact=True)


def side_of(x) -> str:
    """'+' on the closed half x <= 2 (where the larger sub-eigenvalue is used)."""
    return PLUS if x <= 2 else MINUS


@dataclass(frozen=True)
class RegionLabel:
    in_rect: bool
    side: str
    in_wedge_X0: bool
    in_Y0: bool
    in_D0: str | None
    on_rh: bool
    on_rv: bool


def classify_region(p: ChartPoint, a=A_MAX, b=0, ctx: PrecisionCtx | None = None) -> RegionLabel:
    """Membership flags of ``p`` with exact comparisons.

    The wedge X0 (``|y| >= |x-2|/10``) and the triangles D_{b,+}
    (``2-a <= x <= 2-b-10|y|``) and D_{b,-} (``2+b+10|y| <= x <= 2+a``)
    are closed; the wedge Y0 (``|y| > 10|x-2|``) is open. Wedges and
    triangles are intersected with the rectangle R_a.
    """
    ctx = ctx or infer_ctx(p.x, p.y)
    e = edges(ctx, a, b)
    mp = ctx.mp
    x, y = ctx.num(p.x), ctx.num(p.y)
    ay = exact_abs(mp, y)
    adx = exact_abs(mp, mp.fsub(x, 2, exact=True))
    ten_y = mp.fmul(ay, 10, exact=True)
    in_rect = e.x_lo <= x <= e.x_hi and ay <= e.y_max
    in_wedge = in_rect and ten_y >= adx
    in_y0 = in_rect and ay > mp.fmul(adx, 10, exact=True)
    in_d = None
    if e.x_lo <= x and mp.fadd(x, ten_y, exact=True) <= e.d_plus:
        in_d = PLUS
    elif x <= e.x_hi and mp.fsub(x, ten_y, exact=True) >= e.d_minus:
        in_d = MINUS
    return RegionLabel(in_rect, side_of(x), in_wedge, in_y0, in_d, y == 0, x == 2)


def phi(p: ChartPoint, ctx: PrecisionCtx) -> SymTridiagonal3:
    """The chart: the isospectral tridiagonal matrix with coordinates (x, y)."""
    x, y = ctx.num(p.x), ctx.num(p.y)
    x2, y2 = x * x, y * y
    r1s = 4 + x2 + 4 * x2 * y2
    r2s = 4 + 4 * y2 + x2 * y2
    r1, r2 = ctx.mp.sqrt(r1s), ctx.mp.sqrt(r2s)
    k = 1 / (r1s * r2s)
    return SymTridiagonal3(
        d1=(4 - x2) * r2s * k,
        d2=-4 * (4 - x2 - 4 * x2 * y2 * y2 + x2 * x2 * y2 * y2) * k,
        d3=y2 * (x2 - 4) * r1s * k,
        e1=2 * x * r2s * r2 * k,
        e2=2 * y * r1s * r1 * k,
    )


def lu_positive_q(p: ChartPoint, ctx: PrecisionCtx):
    """The LU-positive orthogonal Q with ``phi(p) = Q^T diag(1, -1, 0) Q``."""
    x, y = ctx.num(p.x), ctx.num(p.y)
    r1, r2 = p.r1(ctx), p.r2(ctx)
    k = 1 / (r1 * r2)
    return (
        (2 * r2 * k, 2 * x * (1 + 2 * y * y) * k, x * y * r1 * k),
        (-x * r2 * k, 2 * (2 + x * x * y * y) * k, -2 * y * r1 * k),
        (-2 * x * y * r2 * k, y * (4 - x * x) * k, 2 * r1 * k),
    )


def leading_minors(q):
    m1 = q[0][0]
    m2 = q[0][0] * q[1][1] - q[0][1] * q[1][0]
    m3 = (q[0][0] * (q[1][1] * q[2][2] - q[1][2] * q[2][1])
          - q[0][1] * (q[1][0] * q[2][2] - q[1][2] * q[2][0])
          + q[0][2] * (q[1][0] * q[2][1] - q[1][1] * q[2][0]))
    return m1, m2, m3


def _cross(u, v):
    return (u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0])


def _unit_eigenvector(t: SymTridiagonal3, lam, ctx: PrecisionCtx):
    rows = ((t.d1 - lam, t.e1, ctx.mp.zero),
            (t.e1, t.d2 - lam, t.e2),
            (ctx.mp.zero, t.e2, t.d3 - lam))
    best, best_norm = None, None
    for i, j in ((0, 1), (0, 2), (1, 2)):
        c = _cross(rows[i], rows[j])
        n = ctx.mp.sqrt(c[0] ** 2 + c[1] ** 2 + c[2] ** 2)
        if best_norm is None or n > best_norm:
            best, best_norm = c, n
    if best_norm <= ctx.tol:
        raise ChartDomainError(f"eigenvalue {lam} is not simple for this matrix")
    return tuple(v / best_norm for v in best)


def phi_inverse(t: SymTridiagonal3, ctx: PrecisionCtx) -> ChartPoint:
    """Recover (x, y) from a matrix in the chart's range.

    Rows of Q are unit eigenvectors for 1, -1, 0 (cross products of rows
    of ``T - lambda I``); of the eight row-sign patterns exactly one makes
    Q LU-positive, and then ``x = -2 Q21/Q11``, ``y = Q31/(2 Q21)``.
    """
    t = t.coerce(ctx)
    base = [_unit_eigenvector(t, ctx.num(lam), ctx) for lam in (1, -1, 0)]
    chosen = None
    for signs in product((1, -1), repeat=3):
        q = tuple(tuple(s * v for v in row) for s, row in zip(signs, base))
        if all(m > ctx.tol for m in leading_minors(q)):
            chosen = q
            break
    if chosen is None:
        raise ChartDomainError("no row-sign pattern makes the diagonalizer LU-positive")
    q11, q21, q31 = chosen[0][0], chosen[1][0], chosen[2][0]
    x = -2 * q21 / q11
    if abs(q21) <= ctx.tol:
        if abs(q31) > ctx.tol:
            raise ChartDomainError("Q21 vanishes while Q31 does not: y is unbounded")
        return ChartPoint(x, ctx.mp.zero)
    return ChartPoint(x, q31 / (2 * q21))


def _omega_roots(mp, x, y):
    """(w_minus, w_plus, sqrt(Delta), r1^2) computed without cancellation."""
    x2, y2 = x * x, y * y
    r1s = 4 + x2 + 4 * x2 * y2
    q = x2 - 4
    dxm = x - 2
    sd = mp.sqrt(((x + 2) ** 2 + 8 * x2 * y2) * (dxm * dxm + 8 * x2 * y2))
    prod = -4 * x2 * y2 / r1s
    if q >= 0:
        wp = (q + sd) / (2 * r1s)
        wm = prod / wp if wp != 0 else wp
    else:
        wm = (q - sd) / (2 * r1s)
        wp = prod / wm
    return wm, wp, sd, r1s


def omega_pm(p: ChartPoint, ctx: PrecisionCtx) -> SubEigPair:
    x, y = ctx.num(p.x), ctx.num(p.y)
    wm, wp, _, _ = _omega_roots(ctx.mp, x, y)
    return SubEigPair(wm, wp)


def omega(p: ChartPoint, ctx: PrecisionCtx):
    """Wilkinson shift in coordinates: the larger root if x <= 2, else the smaller."""
    pair = omega_pm(p, ctx)
    return pair.hi if ctx.num(p.x) <= 2 else pair.lo


def omega_cone(p: ChartPoint, ctx: PrecisionCtx) -> SubEigPair:
    """Leading-order cone ``((x-2) -+ sqrt((x-2)^2 + 32 y^2)) / 4`` near (2, 0)."""
    x, y = ctx.num(p.x), ctx.num(p.y)
    root = ctx.mp.sqrt((x - 2) ** 2 + 32 * y * y)
    return SubEigPair((x - 2 - root) / 4, (x - 2 + root) / 4)


def _partials(mp, x, y, sd, r1s):
    x2, y2 = x * x, y * y
    r1q = r1s * r1s
    b = (1 + 2 * y2) * sd
    a = -4 + x2 + 8 * y2 + 6 * x2 * y2 + 16 * x2 * y2 * y2
    # (1+2y^2)^2 Delta - a^2 = 8 y^2 r1^4, used for the cancelling combination
    small = 8 * y2 * r1q / (b + abs(a))
    big = b + abs(a)
    wp_sum, wm_sum = (big, small) if a >= 0 else (small, big)
    fx = 8 * x / (r1q * sd)
    c = (4 - x2) * sd
    d = 16 + 24 * x2 + x2 * x2 + 32 * x2 * y2 + 8 * x2 * x2 * y2
    fy = 4 * x2 * y / (r1q * sd)
    return (fx * wm_sum, fy * (c - d)), (fx * wp_sum, fy * (c + d))


def omega_partials(p: ChartPoint, ctx: PrecisionCtx):
    """``((w-_x, w-_y), (w+_x, w+_y))`` from the closed forms.

    Raises :class:`AtConePoint` where the discriminant vanishes.
    """
    x, y = ctx.num(p.x), ctx.num(p.y)
    _, _, sd, r1s = _omega_roots(ctx.mp, x, y)
    if sd * sd <= ctx.tol * ctx.tol:
        raise AtConePoint("sub-eigenvalues are not differentiable at (2, 0)")
    return _partials(ctx.mp, x, y, sd, r1s)


def coordinate_step(s, p: ChartPoint, ctx: PrecisionCtx | None = None) -> ChartPoint:
    """The s-step in coordinates; continuous at s = 0 where it returns (x, 0)."""
    ctx = ctx or infer_ctx(s, p.x, p.y)
    s, x, y = ctx.num(s), ctx.num(p.x), ctx.num(p.y)
    return ChartPoint((1 + s) / (1 - s) * x, abs(s) / (1 + s) * y)
