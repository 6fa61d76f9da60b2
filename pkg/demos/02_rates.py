"""Cubic convergence off the exceptional set, quadratic convergence on it.

Run: python3 demos/02_rates.py  (about ten seconds)
"""

from wilkshift import ChartPoint, PrecisionCtx, SignSeq, classify, locate, orbit
from wilkshift.dynamics import rate_ratios

# A point inside the right triangle escapes at once; |y| is cubed each step.
ctx = PrecisionCtx(2000)
rec = orbit(ChartPoint(ctx.num("2.05"), ctx.num("0.001")), 6, ctx, stop_at_escape=False)
print("start (2.05, 0.001): sides", rec.sides, "->", classify(rec, ctx))
for k, r in enumerate(rate_ratios(rec, 3)):
    print(f"  k={k}  |y_k+1| / |y_k|^3 = {ctx.mp.nstr(r, 8)}")

# A point whose orbit keeps alternating sides is found by bisection on the
# itinerary; along that orbit |y| is only squared each step.
ctx = PrecisionCtx(3000)
y = ctx.num("0.01")
sigma = SignSeq.alternating(8)
bracket = locate(y, sigma, 8, ctx)
print("\nalternating itinerary at y = 0.01: x in", ctx.mp.nstr(bracket.lo, 25),
      "width", ctx.mp.nstr(bracket.width, 3))
rec = orbit(ChartPoint(bracket.mid, y), 8, ctx, stop_at_escape=False)
print("sides", rec.sides[:8], "->", classify(rec, ctx))
for k, r in enumerate(rate_ratios(rec, 2)[:8]):
    print(f"  k={k}  |y_k+1| / |y_k|^2 = {ctx.mp.nstr(r, 8)}")
