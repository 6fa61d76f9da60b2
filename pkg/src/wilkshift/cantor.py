"""Symbolic dynamics on horizontal lines and finite-scale covers of the exceptional set.

A point's itinerary is read off one step at a time. At step ``k`` its
region code is::

    0  triangle D_{0,+}          3  wedge X0 minus Y0, x > 2
    1  wedge X0 minus Y0, x < 2  4  triangle D_{0,-}
    2  open wedge Y0

(the closed triangles take precedence over the wedge on their common
edges, consistently with the escape rule of :func:`orbit`). Along a
near-horizontal curve these codes, compared lexicographically over
successive steps, never decrease as ``x`` grows: the branches of ``W``
preserve orientation and stretch horizontal vectors. Every search below
relies on that order and stops with :class:`MonotonicityError` the
moment an observation contradicts it.

``I_n^tau`` is the set of points on the line whose first ``n`` steps
follow ``tau`` inside the wedge and whose ``n``-th iterate is in X0;
``J_n^tau`` asks for the ``n``-th iterate to be in Y0 instead.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction

from .chart import A_MAX, PLUS, ChartPoint, check_a, edges, exact_abs
from .dynamics import branch_step, signature
from .errors import BoundViolation, MonotonicityError, NotBracketable, PrecisionBudgetExceeded
from .precision import PrecisionCtx, as_fraction
from .signs import SignSeq, all_strings

__all__ = [
    "Bracket", "LineCover", "PlaneCover", "signature", "locate", "locate_gap",
    "locate_point", "interval_tree", "interval_table", "gap_table", "line_cover", "box_count_line",
    "cover_2d", "sandwich_bounds", "depth_cap", "line_cover_depth", "plane_cover_depth",
    "itinerary", "separation_check", "lipschitz_check",
]

REL_ACCURACY = Fraction(1, 2**40)
_TARGET = {"+": 1, "-": 2}


@dataclass(frozen=True)
class Bracket:
    """Located interval on the line at height ``y``.

    ``lo`` and ``hi`` are points of the located set (inner endpoints);
    ``outer_lo`` and ``outer_hi`` are points known to lie outside it, on
    either side. The true interval contains ``[lo, hi]`` and is contained
    in ``[outer_lo, outer_hi]``.
    """

    lo: object
    hi: object
    y: object
    depth: int
    tau: str
    outer_lo: object
    outer_hi: object

    @property
    def width(self):
        return self.hi - self.lo

    @property
    def outer_width(self):
        return self.outer_hi - self.outer_lo

    @property
    def mid(self):
        return (self.lo + self.hi) / 2


def depth_cap(y, digits: int) -> int:
    """Deepest level whose intervals the working precision can resolve."""
    if y == 0:
        return 64
    decades = abs(math.log10(abs(float(y)))) if abs(float(y)) > 0 else math.inf
    return max(0, int(math.floor(math.log2(digits / (4 * decades)))))


def digits_for_depth(y, n: int) -> int:
    decades = abs(math.log10(abs(float(y))))
    return max(50, math.ceil(4 * decades * 2**n)) + 11


def sandwich_bounds(y, n: int, ctx: PrecisionCtx):
    """``(lower, upper)`` interval lengths at depth ``n`` for a line of height ``y``."""
    y = abs(ctx.num(y))
    lower = (y / 90) ** (2**n) / ctx.mp.mpf(10) ** (n + 1)
    upper = ctx.mp.mpf(2) ** n * (40 * y) ** (2**n)
    return lower, upper


class _Line:
    """Itinerary comparisons at a fixed height."""

    def __init__(self, y, ctx: PrecisionCtx, a):
        self.ctx = ctx
        self.mp = ctx.mp
        self.y = ctx.num(y)
        self.edges = edges(ctx, a)

    def code(self, x, y):
        mp = self.mp
        ay = exact_abs(mp, y)
        ten_y = mp.fmul(ay, 10, exact=True)
        if x >= self.edges.x_lo and mp.fadd(x, ten_y, exact=True) <= 2:
            return 0
        if x <= self.edges.x_hi and mp.fsub(x, ten_y, exact=True) >= 2:
            return 4
        if ay > mp.fmul(exact_abs(mp, mp.fsub(x, 2, exact=True)), 10, exact=True):
            return 2
        return 1 if x < 2 else 3

    def where(self, x, target: str, gap: bool = False) -> int:
        """-1, 0 or +1: left of, inside, or right of the target set."""
        y = self.y
        mp = self.mp
        for symbol in target:
            c = self.code(x, y)
            side = 0 if c == 0 else 3 if c == 4 else (1 if x <= 2 else 2)
            want = _TARGET[symbol]
            if side != want:
                return -1 if side < want else 1
            _, x, y = branch_step(mp, symbol, x, y)
        c = self.code(x, y)
        if gap:
            return -1 if c <= 1 else 1 if c >= 3 else 0
        return -1 if c == 0 else 1 if c == 4 else 0


def _check_height(y, ctx: PrecisionCtx, a):
    e = edges(ctx, a)
    if abs(ctx.num(y)) > e.y_max:
        raise ValueError(f"|y| must be at most a/10, got {y}")


def _search(line: _Line, target: str, lo, hi, ctx: PrecisionCtx, gap: bool):
    """Bracket the target set between ``lo`` (left of it) and ``hi`` (right of it)."""
    where = line.where
    if where(lo, target, gap) != -1 or where(hi, target, gap) != 1:
        raise NotBracketable(f"endpoints do not straddle the set for {target!r}")
    res = ctx.tol
    while True:
        if hi - lo <= res:
            raise NotBracketable(f"set for {target!r} is thinner than the resolution {res}")
        m = (lo + hi) / 2
        w = where(m, target, gap)
        if w == 0:
            break
        if w < 0:
            lo = m
        else:
            hi = m
    l_out, l_in, r_in, r_out = lo, m, m, hi
    rel = ctx.num(REL_ACCURACY)
    while True:
        target_gap = max(rel * (r_in - l_in), res)
        moved = False
        if l_in - l_out > target_gap:
            m = (l_out + l_in) / 2
            w = where(m, target, gap)
            if w > 0:
                raise MonotonicityError(f"point right of the set found left of it for {target!r}")
            if w == 0:
                l_in = m
            else:
                l_out = m
            moved = True
        if r_out - r_in > target_gap:
            m = (r_in + r_out) / 2
            w = where(m, target, gap)
            if w < 0:
                raise MonotonicityError(f"point left of the set found right of it for {target!r}")
            if w == 0:
                r_in = m
            else:
                r_out = m
            moved = True
        if not moved:
            return l_in, r_in, l_out, r_out


def _prefix(sigma, n: int) -> str:
    if isinstance(sigma, str):
        sigma = SignSeq.parse(sigma)
    if sigma.defined_length() < n:
        raise ValueError(f"sign sequence {sigma} is shorter than {n}")
    return sigma.take(n)


def _collapsed(y, n, tau, ctx):
    lo, hi = ctx.num(2) - ctx.tol, ctx.num(2) + ctx.tol
    return Bracket(lo, hi, ctx.num(y), n, tau, lo, hi)


def locate(y, sigma, n: int, ctx: PrecisionCtx, a=A_MAX, within=None) -> Bracket:
    """Bracket ``I_n^tau`` (``tau`` the first ``n`` symbols of ``sigma``) at height ``y``.

    The search starts from ``(2-a, y)`` in ``D_{0,+}`` and ``(2+a, y)`` in
    ``D_{0,-}`` unless ``within`` gives a tighter pair of outside points.
    At ``y = 0`` every arc passes through ``(2, 0)``, so the bracket
    collapses there. Raises :class:`BoundViolation` if the located width
    reaches the upper sandwich bound.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    a = check_a(a)
    _check_height(y, ctx, a)
    tau = _prefix(sigma, n)
    y = ctx.num(y)
    if y == 0:
        return _collapsed(y, n, tau, ctx)
    cap = depth_cap(y, ctx.digits)
    if n > cap:
        raise PrecisionBudgetExceeded(
            f"depth {n} at |y| = {float(abs(y)):.3g} needs {digits_for_depth(y, n)} digits, "
            f"have {ctx.digits}", step=cap)
    e = edges(ctx, a)
    lo, hi = within if within is not None else (e.x_lo, e.x_hi)
    l_in, r_in, l_out, r_out = _search(_Line(y, ctx, a), tau, ctx.num(lo), ctx.num(hi), ctx, False)
    bracket = Bracket(l_in, r_in, y, n, tau, l_out, r_out)
    _, upper = sandwich_bounds(y, n, ctx)
    if bracket.width >= upper:
        raise BoundViolation(f"width of I_{n}^{tau or '()'} at y = {float(y):.3g} "
                             f"exceeds the upper bound")
    return bracket


def locate_gap(y, tau: str, ctx: PrecisionCtx, a=A_MAX, within=None) -> Bracket:
    """Bracket ``J_n^tau``: the part of ``I_n^tau`` whose n-th iterate lies in Y0."""
    a = check_a(a)
    _check_height(y, ctx, a)
    y = ctx.num(y)
    if y == 0:
        return _collapsed(y, len(tau), tau, ctx)
    e = edges(ctx, a)
    lo, hi = within if within is not None else (e.x_lo, e.x_hi)
    l_in, r_in, l_out, r_out = _search(_Line(y, ctx, a), tau, ctx.num(lo), ctx.num(hi), ctx, True)
    return Bracket(l_in, r_in, y, len(tau), tau, l_out, r_out)


def interval_tree(y, n: int, ctx: PrecisionCtx, a=A_MAX) -> dict:
    """Brackets of ``I_k^tau`` for every ``tau`` of length ``k <= n``.

    Children are searched inside the outer bracket of their parent, which
    keeps the nested structure explicit and the search cheap.
    """
    tree = {"": locate(y, SignSeq(""), 0, ctx, a)}
    for k in range(1, n + 1):
        for tau in all_strings(k):
            parent = tree[tau[:-1]]
            tree[tau] = locate(y, SignSeq(tau), k, ctx, a,
                               within=(parent.outer_lo, parent.outer_hi))
    return tree


def interval_table(y, n: int, ctx: PrecisionCtx, a=A_MAX) -> dict:
    """``{tau: Bracket}`` for the ``2**n`` strings of length ``n``, in + < - order."""
    tree = interval_tree(y, n, ctx, a)
    return {tau: tree[tau] for tau in all_strings(n)}


def gap_table(y, tree: dict, ctx: PrecisionCtx, a=A_MAX) -> dict:
    """``{tau: Bracket of J}`` searched inside each bracket of ``tree``."""
    return {tau: locate_gap(y, tau, ctx, a, within=(b.outer_lo, b.outer_hi))
            for tau, b in tree.items()}


def locate_point(y, sigma, ctx: PrecisionCtx, a=A_MAX, depth: int | None = None,
                 within=None):
    """Approximate ``g^sigma(y)``: the midpoint of the deepest affordable bracket."""
    sigma = SignSeq.parse(sigma) if isinstance(sigma, str) else sigma
    cap = depth_cap(ctx.num(y), ctx.digits)
    depth = cap if depth is None else depth
    depth = int(min(depth, sigma.defined_length()))
    bracket = locate(y, sigma, depth, ctx, a, within)
    return bracket.mid, bracket


def itinerary(p: ChartPoint, steps: int, ctx: PrecisionCtx, a=A_MAX) -> SignSeq:
    """Like :func:`signature` but with no precision budget check (for short horizons)."""
    line = _Line(p.y, ctx, a)
    x, y = ctx.num(p.x), ctx.num(p.y)
    out = []
    for _ in range(steps):
        c = line.code(x, y)
        if c == 0:
            return SignSeq("".join(out), "plus_forever")
        if c == 4:
            return SignSeq("".join(out), "minus_forever")
        side = PLUS if x <= 2 else "-"
        out.append(side)
        _, x, y = branch_step(ctx.mp, side, x, y)
    return SignSeq("".join(out))


def line_cover_depth(r) -> int:
    """Smallest n with ``r >= 2**(-2**(n-1))``, i.e. ``ceil(1 + log2(-log2 r))``."""
    r = as_fraction(r)
    if not 0 < r < 1:
        raise ValueError("r must lie in (0, 1)")
    n = 1
    while Fraction(1, 2 ** (2 ** (n - 1))) > r:
        n += 1
    return n


def plane_cover_depth(r) -> int:
    """Smallest n with ``r >= 2**(-2**(n-2))``, i.e. ``ceil(2 + log2(-log2 r))``."""
    return line_cover_depth(r) + 1


def _neg_log2(r, ctx: PrecisionCtx):
    r = as_fraction(r)
    if r.numerator == 1 and r.denominator & (r.denominator - 1) == 0:
        return ctx.num(r.denominator.bit_length() - 1)
    return -ctx.mp.log(ctx.num(r), 2)


def _count_balls(xs, r):
    """Distinct centres and the connected components of overlapping balls."""
    xs = sorted(xs)
    distinct, comps = [], 0
    last = None
    for x in xs:
        if not distinct or x != distinct[-1]:
            distinct.append(x)
        if last is None or x - last >= 2 * r:
            comps += 1
        last = x
    return len(distinct), comps


@dataclass(frozen=True)
class LineCover:
    y: object
    r: Fraction
    n: int
    depth: int
    centers: dict
    count: int
    components: int
    bound: object


def _ctx_for(ys, depth: int, ctx: PrecisionCtx) -> PrecisionCtx:
    need = max(digits_for_depth(y, depth) for y in ys if y != 0)
    return ctx if need <= ctx.digits else ctx.with_digits(need)


def line_cover(y, r, ctx: PrecisionCtx, a=A_MAX, extra_depth: int = 2) -> LineCover:
    """Centres ``t^sigma`` for ``sigma`` in ``S_n^+`` covering the section at height ``y``.

    ``n`` is the smallest integer with ``r >= 2**(-2**(n-1))``; each centre
    is the midpoint of the bracket for ``tau`` followed by ``extra_depth``
    plus signs (fewer if the precision cannot resolve them).
    """
    r = as_fraction(r)
    if r < Fraction(1, 2**32):
        raise ValueError("r must be at least 2**-32")
    n = line_cover_depth(r)
    y_val = ctx.num(y)
    if y_val == 0:
        raise ValueError("the section at y = 0 is the single point (2, 0)")
    work = _ctx_for([y_val], n, ctx)
    y_val = work.num(y)
    depth = max(n, min(n + extra_depth, depth_cap(y_val, work.digits)))
    tree = interval_tree(y_val, n, work, a)
    centers = {}
    for tau in all_strings(n):
        parent = tree[tau]
        b = locate(y_val, SignSeq.eventually_plus(tau), depth, work, a,
                   within=(parent.outer_lo, parent.outer_hi))
        centers[tau] = b.mid
    count, comps = _count_balls(centers.values(), work.num(r))
    bound = 4 * _neg_log2(r, work)
    return LineCover(y_val, r, n, depth, centers, count, comps, bound)


def box_count_line(y, r, ctx: PrecisionCtx, a=A_MAX):
    """``(count, bound)`` for the line cover; raises :class:`BoundViolation` if count > bound."""
    cover = line_cover(y, r, ctx, a)
    if cover.count > cover.bound:
        raise BoundViolation(f"{cover.count} balls exceed the bound {cover.bound}")
    return cover.count, cover.bound


@dataclass(frozen=True)
class PlaneCover:
    r: Fraction
    n: int
    m: int
    heights: tuple
    centers: dict
    count: int
    bound: object


def cover_heights(m: int, a=A_MAX):
    """The ``2m`` heights ``-a/10 + h/2 + j h`` with ``h = a/(10 m)``."""
    a = check_a(a)
    h = a / (10 * m)
    return tuple(-a / 10 + h / 2 + j * h for j in range(2 * m))


def cover_2d(r, ctx: PrecisionCtx, a=A_MAX, full: bool = False):
    """Centres ``(g^sigma(y0), y0)`` over ``S_n^+`` and the height grid ``Y_m``.

    Returns ``(count, bound)`` or, with ``full``, the :class:`PlaneCover`.
    """
    r = as_fraction(r)
    if r < Fraction(1, 2**10):
        raise ValueError("r must be at least 2**-10")
    n = plane_cover_depth(r)
    m = math.ceil(1 / r)
    heights = cover_heights(m, a)
    work = _ctx_for(heights, n, ctx)
    centers = {}
    for y0 in heights:
        yv = work.num(y0)
        depth = max(n, min(n + 1, depth_cap(yv, work.digits)))
        tree = interval_tree(yv, n, work, a)
        for tau in all_strings(n):
            b = locate(yv, SignSeq.eventually_plus(tau), depth, work, a,
                       within=(tree[tau].outer_lo, tree[tau].outer_hi))
            centers[(tau, y0)] = (b.mid, yv)
    count = len(set(centers.values()))
    bound = 32 * _neg_log2(r, work) / work.num(r)
    if count > bound:
        raise BoundViolation(f"{count} balls exceed the bound {bound}")
    cover = PlaneCover(r, n, m, heights, centers, count, bound)
    return cover if full else (count, bound)


def random_sequence(rng: random.Random, length: int) -> SignSeq:
    return SignSeq("".join(rng.choice("+-") for _ in range(length)))


def separation_check(y, sigma1, sigma2, ctx: PrecisionCtx, a=A_MAX):
    """Check the two-sided separation of ``t^sigma1`` and ``t^sigma2``.

    With ``n`` the first index where they differ, both points lie in
    ``I_n^tau`` on opposite sides of ``J_n^tau``. The check is made with
    the outer brackets at depth ``n + 1``: the smallest possible distance
    must exceed the lower bound and the largest possible one must stay
    below the upper bound. Returns ``(ok, min_gap, max_span, lower, upper)``.
    """
    s1 = SignSeq.parse(sigma1) if isinstance(sigma1, str) else sigma1
    s2 = SignSeq.parse(sigma2) if isinstance(sigma2, str) else sigma2
    n = s1.first_difference(s2)
    if n is None:
        raise ValueError("sequences must differ at a defined index")
    b1 = locate(y, s1, n + 1, ctx, a)
    b2 = locate(y, s2, n + 1, ctx, a)
    left, right = (b1, b2) if b1.mid < b2.mid else (b2, b1)
    min_gap = right.outer_lo - left.outer_hi
    max_span = right.outer_hi - left.outer_lo
    lower, upper = sandwich_bounds(y, n, ctx)
    return lower < min_gap and max_span < upper, min_gap, max_span, lower, upper


def lipschitz_check(sigma, y1, y2, ctx: PrecisionCtx, a=A_MAX, depth: int | None = None):
    """Worst-case ``|g(y1) - g(y2)|`` from outer brackets against ``25 |y1 - y2|``."""
    sigma = SignSeq.parse(sigma) if isinstance(sigma, str) else sigma
    depth = depth if depth is not None else min(depth_cap(ctx.num(y1), ctx.digits),
                                                depth_cap(ctx.num(y2), ctx.digits))
    _, b1 = locate_point(y1, sigma, ctx, a, depth)
    _, b2 = locate_point(y2, sigma, ctx, a, depth)
    worst = max(abs(b1.outer_hi - b2.outer_lo), abs(b2.outer_hi - b1.outer_lo))
    limit = 25 * abs(ctx.num(y1) - ctx.num(y2))
    return worst <= limit, worst, limit
