"""The Wilkinson map in chart coordinates and its orbits.

``W(x, y) = F(w(x, y), x, y)``: on the closed half ``x <= 2`` the branch
``W+`` uses the larger sub-eigenvalue, on ``x > 2`` the branch ``W-``
uses the smaller one. Both branches are defined on the closed
rectangles, so ``W-`` can also be evaluated on the line ``x = 2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath

from .chart import (A_MAX, MINUS, PLUS, ChartPoint, RegionLabel, _omega_roots,
                    classify_region, edges, omega_partials, side_of)
from .errors import ConeViolation, PrecisionBudgetExceeded, WrongSide
from .precision import PrecisionCtx
from .signs import MINUS_FOREVER, PLUS_FOREVER, SignSeq

CUBIC = "Cubic"
QUADRATIC = "QuadraticCandidate"
ON_AXIS = "OnAxisFixed"
UNDETERMINED = "Undetermined"

QUAD_WINDOW = (Fraction(1, 10), Fraction(4))
CUBIC_LOWER = Fraction(1, 2)
CONFIRM_STEPS = 2
NEAR_HORIZONTAL_SLOPE = Fraction(1, 25)


def _check_side(side: str):
    if side not in (PLUS, MINUS):
        raise ValueError(f"side must be '+' or '-', got {side!r}")


def branch_step(mp, side: str, x, y):
    """``(shift, X, Y)`` for one branch, with no domain checks."""
    wm, wp, _, _ = _omega_roots(mp, x, y)
    w = wp if side == PLUS else wm
    return w, (1 + w) / (1 - w) * x, abs(w) / (1 + w) * y


def w_side(side: str, p: ChartPoint, ctx: PrecisionCtx, a=A_MAX) -> ChartPoint:
    """Evaluate the branch ``W+`` or ``W-`` on its closed half-rectangle."""
    _check_side(side)
    x, y = ctx.num(p.x), ctx.num(p.y)
    e = edges(ctx, a)
    if not (e.x_lo <= x <= e.x_hi and abs(y) <= e.y_max):
        raise WrongSide(f"({x}, {y}) is outside the rectangle")
    if (side == PLUS and x > 2) or (side == MINUS and x < 2):
        raise WrongSide(f"branch {side} is not defined at x = {ctx.mp.nstr(x, 20)}")
    _, x1, y1 = branch_step(ctx.mp, side, x, y)
    return ChartPoint(x1, y1)


def wilkinson_map(p: ChartPoint, ctx: PrecisionCtx):
    """One Wilkinson step: ``(image, side)`` with side '+' iff x <= 2."""
    x, y = ctx.num(p.x), ctx.num(p.y)
    side = side_of(x)
    _, x1, y1 = branch_step(ctx.mp, side, x, y)
    return ChartPoint(x1, y1), side


def jacobian(side: str, p: ChartPoint, ctx: PrecisionCtx):
    """``DW+`` or ``DW-`` at ``p`` as ``((m11, m12), (m21, m22))``."""
    _check_side(side)
    x, y = ctx.num(p.x), ctx.num(p.y)
    minus_partials, plus_partials = omega_partials(p, ctx)
    wm, wp, _, _ = _omega_roots(ctx.mp, x, y)
    if side == PLUS:
        w, (wx, wy), sign = wp, plus_partials, 1
    else:
        w, (wx, wy), sign = wm, minus_partials, -1
    d = (1 - w) ** 2
    e = (1 + w) ** 2
    return ((2 * wx * x / d + (1 + w) / (1 - w), 2 * wy * x / d),
            (sign * wx * y / e, sign * (wy * y / e + w / (1 + w))))


def det2(m):
    return m[0][0] * m[1][1] - m[0][1] * m[1][0]


def is_near_horizontal(v) -> bool:
    return v[0] > 0 and abs(v[1]) * NEAR_HORIZONTAL_SLOPE.denominator < v[0]


def push_cone(side: str, p: ChartPoint, v, ctx: PrecisionCtx):
    """Push a near-horizontal vector forward by ``DW`` and check the cone.

    Raises :class:`ConeViolation` unless the image is near-horizontal with
    ``v1/2 < w1 < 10 v1``.
    """
    v = (ctx.num(v[0]), ctx.num(v[1]))
    if not is_near_horizontal(v):
        raise ValueError("input vector is not near-horizontal")
    m = jacobian(side, p, ctx)
    w = (m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1])
    if not (is_near_horizontal(w) and v[0] / 2 < w[0] < 10 * v[0]):
        raise ConeViolation(f"DW{side} at ({ctx.mp.nstr(p.x, 20)}, {ctx.mp.nstr(p.y, 20)}) "
                            f"maps {v} to {w}")
    return w


def digits_needed(kmax: int, y0) -> int:
    """Working digits required to follow ``kmax`` quadratic steps from height ``y0``."""
    if y0 == 0:
        return 20
    decades = abs(float(mpmath.log10(abs(mpmath.mpf(y0)))))
    return 20 + math.ceil(4 * decades * 2**kmax)


def max_steps(y0, digits: int, cap: int = 64) -> int:
    """Largest kmax that :func:`digits_needed` admits at ``digits``."""
    k = 0
    while k < cap and digits_needed(k + 1, y0) <= digits:
        k += 1
    return k


@dataclass(frozen=True)
class OrbitRecord:
    """A computed W-orbit ``p_0 ... p_K``.

    ``shifts[k]`` and ``sides[k]`` belong to the step ``p_k -> p_k+1``;
    ``regions[k]`` labels ``p_k``. ``sides`` is a '+'/'-' string.
    ``underflow_step`` is set when ``|y_k|`` fell below the comparison
    tolerance before any escape, which ends the orbit early.
    """

    points: tuple
    shifts: tuple
    sides: str
    regions: tuple
    escape_step: int | None
    escape_side: str | None
    underflow_step: int | None = None
    kmax: int = 0
    a: Fraction = field(default=A_MAX)

    @property
    def steps(self) -> int:
        return len(self.shifts)

    def side_sequence(self) -> SignSeq:
        return SignSeq(self.sides)


def orbit(p0: ChartPoint, kmax: int, ctx: PrecisionCtx, a=A_MAX,
          stop_at_escape: bool = True) -> OrbitRecord:
    """Iterate the Wilkinson map from ``p0`` for at most ``kmax`` steps.

    With ``stop_at_escape`` the orbit ends two confirmation steps after the
    first visit to a triangle ``D_{0,+-}``. Raises
    :class:`PrecisionBudgetExceeded` when ``ctx.digits`` is below
    :func:`digits_needed`; its ``step`` is the largest admissible kmax.
    """
    if kmax < 1:
        raise ValueError("kmax must be >= 1")
    p = p0.coerce(ctx)
    need = digits_needed(kmax, p.y)
    if ctx.digits < need:
        raise PrecisionBudgetExceeded(
            f"{kmax} steps from |y0| = {ctx.mp.nstr(abs(p.y), 5)} need {need} digits, "
            f"have {ctx.digits}", step=max_steps(p.y, ctx.digits))
    e = edges(ctx, a)
    if not (e.x_lo <= p.x <= e.x_hi and abs(p.y) <= e.y_max):
        raise ValueError("initial point must lie in the rectangle")

    points, shifts, sides, regions = [p], [], [], []
    escape_step = escape_side = underflow = None
    for k in range(kmax + 1):
        label = classify_region(p, a, 0, ctx)
        regions.append(label)
        if escape_step is None and label.in_D0 is not None:
            escape_step, escape_side = k, label.in_D0
        if k == kmax:
            break
        if stop_at_escape and escape_step is not None and k >= escape_step + CONFIRM_STEPS:
            break
        if escape_step is None and p.y != 0 and abs(p.y) < ctx.tol:
            underflow = k
            break
        w, x1, y1 = branch_step(ctx.mp, label.side, p.x, p.y)
        shifts.append(w)
        sides.append(label.side)
        p = ChartPoint(x1, y1)
        points.append(p)
    return OrbitRecord(tuple(points), tuple(shifts), "".join(sides), tuple(regions),
                       escape_step, escape_side, underflow, kmax, Fraction(a))


@dataclass(frozen=True)
class Classification:
    kind: str
    witness_step: int
    ratio_log: tuple

    def __str__(self):
        return f"{self.kind} (witness step {self.witness_step})"


def ratio_logs(rec: OrbitRecord, ctx: PrecisionCtx):
    out = []
    for a, b in zip(rec.points, rec.points[1:]):
        if a.y == 0 or b.y == 0 or abs(a.y) == 1:
            break
        out.append(ctx.mp.log(abs(b.y)) / ctx.mp.log(abs(a.y)))
    return tuple(out)


def rate_ratios(rec: OrbitRecord, power: int, start: int = 0):
    """``|y_k+1| / |y_k|**power`` for k >= start (stopping at y = 0)."""
    out = []
    for a, b in zip(rec.points[start:], rec.points[start + 1:]):
        if a.y == 0:
            break
        out.append(abs(b.y) / abs(a.y) ** power)
    return tuple(out)


def classify(rec: OrbitRecord, ctx: PrecisionCtx) -> Classification:
    """Rate certificate for a finite orbit.

    ``Cubic`` when the orbit entered a triangle and every later step obeyed
    ``|y_k+1| >= |y_k|**3 / 2``; ``QuadraticCandidate`` when it never
    escaped and every step stayed in ``[1/10, 4] * |y_k|**2``. The latter
    is a finite-horizon certificate only: membership of the exceptional
    set cannot be decided from finitely many iterates.
    """
    logs = ratio_logs(rec, ctx)
    if rec.points[0].y == 0:
        return Classification(ON_AXIS, 0, logs)
    lo, hi = (ctx.num(c) for c in QUAD_WINDOW)
    half = ctx.num(CUBIC_LOWER)
    if rec.escape_step is not None:
        for k, r in enumerate(rate_ratios(rec, 3, rec.escape_step), rec.escape_step):
            if r < half:
                return Classification(UNDETERMINED, k, logs)
        return Classification(CUBIC, rec.escape_step, logs)
    if rec.underflow_step is not None:
        return Classification(UNDETERMINED, rec.underflow_step, logs)
    for k, r in enumerate(rate_ratios(rec, 2)):
        if not lo <= r <= hi:
            return Classification(UNDETERMINED, k, logs)
    return Classification(QUADRATIC, rec.steps, logs)


def signature(p: ChartPoint, nmax: int, ctx: PrecisionCtx, a=A_MAX) -> SignSeq:
    """Itinerary of ``p``: sides visited before escape, then the forced tail."""
    rec = orbit(p, nmax, ctx, a)
    if rec.escape_step is None:
        return SignSeq(rec.sides[:nmax])
    tail = PLUS_FOREVER if rec.escape_side == PLUS else MINUS_FOREVER
    return SignSeq(rec.sides[:min(nmax, rec.escape_step)], tail)


def region_flags(label: RegionLabel) -> str:
    """Compact text form of a region label (used by serializers)."""
    parts = []
    if label.in_rect:
        parts.append("R")
    if label.in_wedge_X0:
        parts.append("X0")
    if label.in_Y0:
        parts.append("Y0")
    if label.in_D0:
        parts.append("D0" + label.in_D0)
    if label.on_rh:
        parts.append("rh")
    if label.on_rv:
        parts.append("rv")
    return "|".join(parts)
