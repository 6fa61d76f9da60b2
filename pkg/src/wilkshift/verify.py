"""Sampled verification suites, one per quantitative statement about W.

Each suite evaluates its inequalities on explicit grids and returns a
:class:`Report` listing every violation with a witness point. Strict
inequalities are tested as written. Non-strict ones allow the comparison
tolerance ``ctx.tol`` of slack, which only matters where both sides agree
to working precision (for instance on the axis ``y = 0``).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from .cantor import (cover_2d, depth_cap, gap_table, interval_tree, line_cover,
                     lipschitz_check, locate_point, sandwich_bounds, separation_check)
from .chart import (A_MAX, MINUS, PLUS, ChartPoint, check_a, classify_region, edges,
                    omega_cone, omega_partials, omega_pm)
from .dynamics import (CUBIC, QUADRATIC, branch_step, classify, det2, jacobian, max_steps,
                       orbit, push_cone, rate_ratios)
from .errors import ConeViolation, WilkshiftError
from .precision import PrecisionCtx
from .signs import SignSeq, all_strings

MAX_WITNESSES = 100


@dataclass
class Violation:
    check: str
    point: tuple
    detail: str = ""


@dataclass
class Report:
    suite: str
    samples: int = 0
    violation_count: int = 0
    violations: list = field(default_factory=list)
    info: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.violation_count == 0

    def record(self, check: str, point, detail: str = ""):
        self.violation_count += 1
        if len(self.violations) < MAX_WITNESSES:
            self.violations.append(Violation(check, tuple(point), detail))

    def expect(self, condition: bool, check: str, point, detail: str = ""):
        if not condition:
            self.record(check, point, detail)

    def merge(self, other: Report):
        self.samples += other.samples
        self.violation_count += other.violation_count
        room = MAX_WITNESSES - len(self.violations)
        self.violations.extend(other.violations[:max(room, 0)])
        self.info.update(other.info)

    def summary(self) -> str:
        return f"{self.suite}: {self.violation_count} violations / {self.samples} samples"


# grids ----------------------------------------------------------------

def linspace(lo, hi, count: int):
    """``count`` equally spaced values with both endpoints reproduced exactly."""
    if count < 2:
        return [lo]
    step = (hi - lo) / (count - 1)
    return [lo] + [lo + i * step for i in range(1, count - 1)] + [hi]


def rect_grid(g: int, ctx: PrecisionCtx, a=A_MAX, side: str | None = None):
    """``g x g`` grid on the closed rectangle or on one closed half of it."""
    e = edges(ctx, a)
    two = ctx.num(2)
    x_lo, x_hi = {None: (e.x_lo, e.x_hi), PLUS: (e.x_lo, two), MINUS: (two, e.x_hi)}[side]
    ys = linspace(-e.y_max, e.y_max, g)
    return [ChartPoint(x, y) for x in linspace(x_lo, x_hi, g) for y in ys]


def wedge_grid(g: int, ctx: PrecisionCtx, a=A_MAX, side: str = PLUS):
    """Grid on the closed wedge X0 on one side of x = 2 (points filtered by the exact predicate)."""
    e = edges(ctx, a)
    mp = ctx.mp
    sign = -1 if side == PLUS else 1
    out = []
    for y in linspace(-e.y_max, e.y_max, g):
        reach = mp.fmul(abs(y), 10, exact=True)
        for u in linspace(ctx.num(0), ctx.num(1), g):
            x = 2 + sign * reach if u == 1 else 2 + sign * reach * u
            p = ChartPoint(x, y)
            lab = classify_region(p, a, 0, ctx)
            if lab.in_wedge_X0 and (x == 2 or lab.side == side):
                out.append(p)
    return out


def triangle_grid(g: int, ctx: PrecisionCtx, a=A_MAX, b=0, side: str = PLUS):
    """Grid on the closed triangle ``D_{b,side}`` (filtered by the exact predicate)."""
    a = check_a(a)
    e = edges(ctx, a, b)
    mp = ctx.mp
    top = ctx.num((a - Fraction(b)) / 10)
    out = []
    for y in linspace(-top, top, g):
        reach = mp.fmul(abs(y), 10, exact=True)
        if side == PLUS:
            lo, hi = e.x_lo, mp.fsub(e.d_plus, reach, exact=True)
        else:
            lo, hi = mp.fadd(e.d_minus, reach, exact=True), e.x_hi
        if hi < lo:
            continue
        for x in linspace(lo, hi, g):
            p = ChartPoint(x, y)
            if classify_region(p, a, b, ctx).in_D0 == side:
                out.append(p)
    return out


def y0_grid(g: int, ctx: PrecisionCtx, a=A_MAX):
    """Grid on the open wedge Y0 (y = 0 excluded)."""
    e = edges(ctx, a)
    out = []
    for y in linspace(-e.y_max, e.y_max, g):
        if y == 0:
            continue
        for i in range(g):
            u = ctx.num(-1) + ctx.num(2 * (i + 1)) / (g + 1)
            p = ChartPoint(2 + u * abs(y) / 10, y)
            if classify_region(p, a, 0, ctx).in_Y0:
                out.append(p)
    return out


def _pt(p: ChartPoint):
    return (p.x, p.y)


def _branches(p: ChartPoint):
    """Branches defined at ``p``: its own side, and both on the line x = 2."""
    if p.x == 2:
        return (PLUS, MINUS)
    return (PLUS,) if p.x < 2 else (MINUS,)


REGIONS = ("R+", "R-", "X0+", "X0-")


def region_grid(name: str, g: int, ctx: PrecisionCtx, a=A_MAX):
    if name == "R":
        return rect_grid(g, ctx, a)
    kind, side = name[:-1], name[-1]
    if kind == "R":
        return rect_grid(g, ctx, a, side)
    if kind == "X0":
        return wedge_grid(g, ctx, a, side)
    raise ValueError(f"unknown region {name!r}")


# sub-eigenvalues ------------------------------------------------------

def shift_bounds(g: int, ctx: PrecisionCtx, a=A_MAX, regions=("R",)) -> Report:
    """Cone bounds on the sub-eigenvalue used on each side, the root product and the cone fit."""
    rep = Report("lemma3.5")
    tol = ctx.tol
    fit = ctx.num(0)
    for region in regions:
        for p in region_grid(region, g, ctx, a):
            rep.samples += 1
            x, y = p.x, p.y
            pair = omega_pm(p, ctx)
            ay = abs(y)
            lab = classify_region(p, a, 0, ctx)
            for s in _branches(p):
                w = abs(pair.hi if s == PLUS else pair.lo)
                rep.expect(y * y - tol <= w, f"y^2 <= |w{s}|", _pt(p))
                rep.expect(w <= 2 * ay + tol, f"|w{s}| <= 2|y|", _pt(p))
                if lab.in_wedge_X0:
                    rep.expect(ay / 5 - tol <= w, f"|y|/5 <= |w{s}| in X0", _pt(p))
            r1s = 4 + x * x + 4 * x * x * y * y
            rep.expect(abs(pair.hi * pair.lo + 4 * x * x * y * y / r1s) <= 100 * tol,
                       "w+ w- = -4x^2y^2/r1^2", _pt(p))
            d2 = (x - 2) ** 2 + y * y
            if d2 != 0:
                cone = omega_cone(p, ctx)
                fit = max(fit, abs(pair.lo - cone.lo) / d2, abs(pair.hi - cone.hi) / d2)
    rep.info["cone_fit_constant"] = fit
    return rep


def finite_difference_partials(p: ChartPoint, ctx: PrecisionCtx):
    """Central differences of both roots with step ``10**(-digits/3)``."""
    h = ctx.mp.mpf(10) ** (-(ctx.digits // 3))
    def roots(dx, dy):
        return omega_pm(ChartPoint(p.x + dx, p.y + dy), ctx)
    xp, xm, yp, ym = roots(h, 0), roots(-h, 0), roots(0, h), roots(0, -h)
    minus = ((xp.lo - xm.lo) / (2 * h), (yp.lo - ym.lo) / (2 * h))
    plus = ((xp.hi - xm.hi) / (2 * h), (yp.hi - ym.hi) / (2 * h))
    return minus, plus


def shift_derivatives(g: int, ctx: PrecisionCtx, a=A_MAX, regions=("R",), fd_points: int = 20,
              seed: int = 0) -> Report:
    """Derivative bounds and signs of both roots, and agreement with finite differences."""
    rep = Report("lemma3.6")
    seven_thirds = ctx.num(Fraction(7, 3))
    for region in regions:
        for p in region_grid(region, g, ctx, a):
            if p.x == 2 and p.y == 0:
                continue
            rep.samples += 1
            minus, plus = omega_partials(p, ctx)
            for s, (wx, wy) in ((MINUS, minus), (PLUS, plus)):
                rep.expect(0 <= wx < 1, f"0 <= (w{s})_x < 1", _pt(p))
                rep.expect(abs(wy) < seven_thirds, f"|(w{s})_y| < 7/3", _pt(p))
                if p.y != 0:
                    sgn = 1 if s == PLUS else -1
                    rep.expect(sgn * p.y * wy > 0, f"{s}y (w{s})_y > 0", _pt(p))
                    rep.expect(wx > 0, f"(w{s})_x > 0 off the axis", _pt(p))
            if p.y == 0:
                rep.expect(plus[0] == 0 if p.x < 2 else plus[0] > 0, "(w+)_x = 0 iff x < 2 on y = 0", _pt(p))
                rep.expect(minus[0] == 0 if p.x > 2 else minus[0] > 0, "(w-)_x = 0 iff x > 2 on y = 0", _pt(p))
    rep.info["fd_max_relative_error"] = fd_agreement(ctx, a, fd_points, seed, rep)
    return rep


def fd_agreement(ctx: PrecisionCtx, a, count: int, seed: int, rep: Report | None = None):
    """Largest relative error of the closed-form partials against central differences."""
    rng = random.Random(seed)
    e = edges(ctx, a)
    limit = ctx.mp.mpf(10) ** (-(ctx.digits // 4))
    worst = ctx.num(0)
    for _ in range(count):
        u, v = ctx.num(rng.random()), ctx.num(rng.random())
        p = ChartPoint(e.x_lo + (e.x_hi - e.x_lo) * u, e.y_max * (2 * v - 1))
        if p.y == 0:
            continue
        exact = omega_partials(p, ctx)
        approx = finite_difference_partials(p, ctx)
        for pair_e, pair_a in zip(exact, approx):
            for ve, va in zip(pair_e, pair_a):
                err = abs(ve - va) / abs(ve)
                worst = max(worst, err)
                if rep is not None:
                    rep.samples += 1
                    rep.expect(err <= limit, "closed form = finite difference", _pt(p),
                               f"relative error {ctx.mp.nstr(err, 5)}")
    return worst


# invariance, triangles and cones --------------------------------------

def invariance(g: int, ctx: PrecisionCtx, a=A_MAX) -> Report:
    """W maps the rectangle into itself, contracts y by 49, and moves x the right way."""
    rep = Report("prop4.1")
    e = edges(ctx, a)
    mp = ctx.mp

    def in_rect(q):
        return e.x_lo <= q[1] <= e.x_hi and abs(q[2]) <= e.y_max

    for p in rect_grid(g, ctx, a):
        rep.samples += 1
        for s in _branches(p):
            img = branch_step(mp, s, p.x, p.y)
            rep.expect(in_rect(img), "W(R_a) in R_a", _pt(p))
            rep.expect(49 * abs(img[2]) <= abs(p.y), "|Y| <= |y|/49", _pt(p))
            if s == PLUS:
                ok = img[1] > p.x if p.y != 0 else img[1] == p.x
                rep.expect(ok, "X+ >= x, equality iff y = 0", _pt(p))
            else:
                ok = img[1] < p.x if p.y != 0 else img[1] == p.x
                rep.expect(ok, "X- <= x, equality iff y = 0", _pt(p))
    two = ctx.num(2)
    for y in linspace(-e.y_max, e.y_max, g):
        rep.samples += 1
        _, x1, _ = branch_step(mp, PLUS, e.x_lo, y)
        rep.expect(e.x_lo <= x1 <= two, "W+({2-a} x I) in R_a,+", (e.x_lo, y))
        _, x1, _ = branch_step(mp, MINUS, e.x_hi, y)
        rep.expect(two <= x1 <= e.x_hi, "W-({2+a} x I) in R_a,-", (e.x_hi, y))
        _, x1, _ = branch_step(mp, PLUS, two, y)
        rep.expect(two <= x1 <= e.x_hi, "W+(r_v) in R_a,-", (two, y))
        _, x1, _ = branch_step(mp, MINUS, two, y)
        rep.expect(e.x_lo <= x1 <= two, "W-(r_v) in R_a,+", (two, y))
    return rep


def _in_triangle_interior(q, e, mp, side: str) -> bool:
    x, y = q
    reach = mp.fmul(abs(y), 10, exact=True)
    if side == PLUS:
        return e.x_lo < x and mp.fadd(x, reach, exact=True) < e.d_plus
    return x < e.x_hi and mp.fsub(x, reach, exact=True) > e.d_minus


def _on_triangle_boundary(p: ChartPoint, e, mp, side: str) -> bool:
    return not _in_triangle_interior((p.x, p.y), e, mp, side)


def triangle_dynamics(g: int, ctx: PrecisionCtx, a=A_MAX, bs=None) -> Report:
    """Triangle invariance, boundary points mapped inside, and Y0 thrown across."""
    a = check_a(a)
    rep = Report("prop4.2")
    mp = ctx.mp
    bs = bs if bs is not None else (Fraction(0), a / 4, a / 2)
    for b in bs:
        e = edges(ctx, a, b)
        for side in (PLUS, MINUS):
            corners = {(ctx.num(2 - b if side == PLUS else 2 + b), 0),
                       (e.x_lo if side == PLUS else e.x_hi, 0)}
            for p in triangle_grid(g, ctx, a, b, side):
                rep.samples += 1
                _, x1, y1 = branch_step(mp, side, p.x, p.y)
                img = ChartPoint(x1, y1)
                rep.expect(classify_region(img, a, b, ctx).in_D0 == side,
                           f"W{side}(D_b,{side}) in D_b,{side} (b={b})", _pt(p))
                if (p.x, p.y) not in corners and _on_triangle_boundary(p, e, mp, side):
                    rep.expect(_in_triangle_interior((x1, y1), e, mp, side),
                               f"W{side}(boundary of D_b,{side}) in interior (b={b})", _pt(p))
    e0 = edges(ctx, a, 0)
    for p in y0_grid(g, ctx, a):
        rep.samples += 1
        for s in _branches(p):
            _, x1, y1 = branch_step(mp, s, p.x, p.y)
            other = MINUS if s == PLUS else PLUS
            rep.expect(_in_triangle_interior((x1, y1), e0, mp, other),
                       f"W{s}(Y0) in int(D_0,{other})", _pt(p))
    return rep


def orientation(g: int, ctx: PrecisionCtx, a=A_MAX) -> Report:
    """Orientation: det DW > 0 on each closed half off the axis y = 0."""
    rep = Report("prop4.3")
    for side in (PLUS, MINUS):
        for p in rect_grid(g, ctx, a, side):
            if p.y == 0:
                continue
            rep.samples += 1
            rep.expect(det2(jacobian(side, p, ctx)) > 0, f"det DW{side} > 0", _pt(p))
    return rep


def cone_invariance(g: int, ctx: PrecisionCtx, a=A_MAX, random_samples: int = 0,
              seed: int = 0) -> Report:
    """Entry bounds of DW and forward invariance of the near-horizontal cone."""
    rep = Report("lemma4.4")
    bounds = (ctx.num(Fraction(96, 100)), ctx.num(Fraction(55, 10)), ctx.num(Fraction(105, 10)),
              ctx.num(Fraction(105, 10000)), ctx.num(Fraction(45, 1000)))
    lo11, hi11, b12, b21, b22 = bounds
    probes = [(ctx.num(1), ctx.num(0)), (ctx.num(1), ctx.num(1) / 26), (ctx.num(1), ctx.num(-1) / 26)]
    for side in (PLUS, MINUS):
        for p in rect_grid(g, ctx, a, side):
            if p.x == 2 and p.y == 0:
                continue
            rep.samples += 1
            m = jacobian(side, p, ctx)
            rep.expect(lo11 < m[0][0] < hi11, "0.96 < m11 < 5.5", _pt(p))
            rep.expect(abs(m[0][1]) < b12, "|m12| < 10.5", _pt(p))
            rep.expect(abs(m[1][0]) < b21, "|m21| < 0.0105", _pt(p))
            rep.expect(abs(m[1][1]) < b22, "|m22| < 0.045", _pt(p))
            for v in probes:
                try:
                    push_cone(side, p, v, ctx)
                except ConeViolation as exc:
                    rep.record("near-horizontal cone preserved", _pt(p), str(exc))
    if random_samples:
        rep.merge(cone_random(random_samples, ctx, a, seed))
    return rep


def cone_random(count: int, ctx: PrecisionCtx, a=A_MAX, seed: int = 0) -> Report:
    """``count`` random (point, near-horizontal vector) pairs pushed through DW."""
    rep = Report("lemma4.4-random")
    rng = random.Random(seed)
    e = edges(ctx, a)
    for _ in range(count):
        x = e.x_lo + (e.x_hi - e.x_lo) * ctx.num(rng.random())
        y = e.y_max * (2 * ctx.num(rng.random()) - 1)
        p = ChartPoint(x, y)
        if x == 2 and y == 0:
            continue
        slope = ctx.num(rng.uniform(-1, 1)) / 25
        v = (ctx.num(1), slope * ctx.num(1 - Fraction(1, 10**6)))
        rep.samples += 1
        try:
            push_cone(PLUS if x <= 2 else MINUS, p, v, ctx)
        except ConeViolation as exc:
            rep.record("near-horizontal cone preserved", _pt(p), str(exc))
    return rep


# convergence rates ----------------------------------------------------

def rate_windows(g: int, ctx: PrecisionCtx, a=A_MAX, kmax: int = 5) -> Report:
    """Rate dichotomy on a grid of starting points off the axis."""
    rep = Report("prop5.1")
    lo, hi = ctx.num(Fraction(1, 10)), ctx.num(4)
    kinds = {CUBIC: 0, QUADRATIC: 0}
    for p in rect_grid(g, ctx, a):
        if p.y == 0:
            continue
        rep.samples += 1
        steps = min(kmax, max_steps(p.y, ctx.digits))
        if steps < 1:
            rep.record("precision budget admits one step", _pt(p))
            continue
        rec = orbit(p, steps, ctx)
        kind = classify(rec, ctx)
        rep.expect(kind.kind in kinds, "orbit is Cubic or QuadraticCandidate", _pt(p),
                   f"{kind.kind} at step {kind.witness_step}")
        if kind.kind in kinds:
            kinds[kind.kind] += 1
        stop = rec.escape_step if rec.escape_step is not None else rec.steps
        for k, r in enumerate(rate_ratios(rec, 2)[:stop]):
            rep.expect(lo - ctx.tol <= r <= hi + ctx.tol, "|y|^2/10 <= |Y| <= 4|y|^2 in X0",
                       _pt(p), f"step {k}")
    rep.info["kinds"] = kinds
    return rep


# interval structure and covers ----------------------------------------

def default_heights(ctx: PrecisionCtx, a=A_MAX, count: int = 3):
    e = edges(ctx, a)
    return [e.y_max / 2**j for j in range(count)]


def sandwich(g: int, ctx: PrecisionCtx, a=A_MAX, nmax: int = 3, heights=None) -> Report:
    """Interval order, disjointness, nesting and the length sandwich on horizontal lines."""
    rep = Report("lemma6.2")
    heights = heights if heights is not None else default_heights(ctx, a, max(1, min(g, 3)))
    for y in heights:
        n = min(nmax, depth_cap(y, ctx.digits))
        tree = interval_tree(y, n, ctx, a)
        gaps = gap_table(y, tree, ctx, a)
        for k in range(n + 1):
            row = [tree[t] for t in all_strings(k)]
            for left, right in zip(row, row[1:]):
                rep.expect(left.outer_hi <= right.outer_lo,
                           "I_n ordered and disjoint", (left.hi, y), f"{left.tau} / {right.tau}")
            lower, upper = sandwich_bounds(y, k, ctx)
            for b in row:
                rep.samples += 1
                j = gaps[b.tau]
                rep.expect(lower < j.width, "lower bound < mu(J)", (b.mid, y), b.tau or "()")
                rep.expect(j.outer_width < b.width,
                           "mu(J) < mu(I)", (b.mid, y), b.tau or "()")
                rep.expect(b.outer_width < upper, "mu(I) < upper bound", (b.mid, y), b.tau or "()")
                if k < n:
                    plus, minus = tree[b.tau + "+"], tree[b.tau + "-"]
                    rep.expect(b.outer_lo <= plus.outer_lo and minus.outer_hi <= b.outer_hi,
                               "children inside parent", (b.mid, y), b.tau or "()")
                    rep.expect(plus.hi < j.lo and j.hi < minus.lo,
                               "children split by J", (b.mid, y), b.tau or "()")
    return rep


def cover_claims(g: int, ctx: PrecisionCtx, a=A_MAX, seed: int = 0) -> Report:
    """Lipschitz bound, separation, and cover counts at small scale."""
    rep = Report("thm6.1-claims")
    rng = random.Random(seed)
    e = edges(ctx, a)
    count = max(1, min(g, 10))
    for _ in range(count):
        sigma = SignSeq("".join(rng.choice("+-") for _ in range(6)))
        y1 = e.y_max * ctx.num(rng.uniform(0.2, 1))
        y2 = e.y_max * ctx.num(rng.uniform(0.2, 1))
        rep.samples += 1
        ok, worst, limit = lipschitz_check(sigma, y1, y2, ctx, a)
        rep.expect(ok, "|g(y1) - g(y2)| <= 25|y1 - y2|", (y1, y2), str(sigma))
    y = e.y_max
    for _ in range(count):
        n = rng.randrange(0, 3)
        head = "".join(rng.choice("+-") for _ in range(n))
        s1 = SignSeq(head + "+" + "".join(rng.choice("+-") for _ in range(2)))
        s2 = SignSeq(head + "-" + "".join(rng.choice("+-") for _ in range(2)))
        rep.samples += 1
        ok, gap, span, lower, upper = separation_check(y, s1, s2, ctx, a)
        rep.expect(ok, "separation within the sandwich", (y,), f"{s1} / {s2}")
    for r in (Fraction(1, 2), Fraction(1, 16)):
        rep.samples += 1
        cover = line_cover(y, r, ctx, a)
        rep.expect(cover.count <= cover.bound, "line cover count <= -4 log2 r", (y,), f"r = {r}")
        rep.merge(line_coverage(cover, ctx, a, count, rng))
    rep.samples += 1
    count2, bound2 = cover_2d(Fraction(1, 2), ctx, a)
    rep.expect(count2 <= bound2, "plane cover count <= -32 log2(r) / r", (ctx.num(1) / 2,))
    return rep


def line_coverage(cover, ctx: PrecisionCtx, a, samples: int, rng: random.Random) -> Report:
    """Located points of the section lie within r of some centre of the cover."""
    rep = Report("line-coverage")
    r = ctx.num(cover.r)
    centers = sorted(cover.centers.values())
    for _ in range(samples):
        sigma = SignSeq("".join(rng.choice("+-") for _ in range(cover.n + 2)))
        x, _ = locate_point(cover.y, sigma, ctx, a, depth=min(cover.n + 2,
                                                               depth_cap(cover.y, ctx.digits)))
        rep.samples += 1
        rep.expect(min(abs(x - c) for c in centers) < r, "section point covered", (x, cover.y),
                   str(sigma))
    return rep


SUITES = {
    "lemma3.5": shift_bounds,
    "lemma3.6": shift_derivatives,
    "prop4.1": invariance,
    "prop4.2": triangle_dynamics,
    "prop4.3": orientation,
    "lemma4.4": cone_invariance,
    "prop5.1": rate_windows,
    "lemma6.2": sandwich,
    "thm6.1-claims": cover_claims,
}


def run_suite(name: str, g: int, ctx: PrecisionCtx, a=A_MAX, **options) -> Report:
    try:
        fn = SUITES[name]
    except KeyError:
        raise ValueError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}") from None
    try:
        return fn(g, ctx, a, **options)
    except WilkshiftError as exc:
        rep = Report(name)
        rep.record(type(exc).__name__, (), str(exc))
        return rep
