"""One Wilkinson step, seen twice: on the matrix and in (x, y) coordinates.

Run: python3 demos/01_one_step.py
"""

from wilkshift import ChartPoint, PrecisionCtx, phi, phi_inverse, wilkinson_map, wilkinson_step
from wilkshift.chart import omega_pm
from wilkshift.tridiag import max_abs_diff, spectrum_residual

ctx = PrecisionCtx(100)
p = ChartPoint(ctx.num("2"), ctx.num("0.01"))

# The chart turns two numbers into a tridiagonal matrix with spectrum {1, -1, 0}.
t = phi(p, ctx)
print("T = phi(2, 0.01)")
for name, value in zip(("d1", "d2", "d3", "e1", "e2"), t.entries()):
    print(f"  {name} = {ctx.mp.nstr(value, 12)}")
print("spectrum residual:", ctx.mp.nstr(spectrum_residual(t), 3))

# Sub-eigenvalues of the trailing 2x2 block; on x = 2 they are symmetric and
# the tie goes to the larger one.
pair = omega_pm(p, ctx)
print("sub-eigenvalues:", ctx.mp.nstr(pair.lo, 10), ctx.mp.nstr(pair.hi, 10))

# The matrix QR step and the coordinate formula land on the same matrix.
image, side = wilkinson_map(p, ctx)
t1 = wilkinson_step(t, ctx)
print(f"W{side}(2, 0.01) = ({ctx.mp.nstr(image.x, 12)}, {ctx.mp.nstr(image.y, 12)})")
print("matrix step vs phi(W(p)):", ctx.mp.nstr(max_abs_diff(t1, phi(image, ctx)), 3))

# And the chart can be inverted from the matrix alone.
back = phi_inverse(t1, ctx)
print("phi_inverse(T1) =", ctx.mp.nstr(back.x, 12), ctx.mp.nstr(back.y, 12))
