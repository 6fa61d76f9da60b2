"""Horizontal sections of the exceptional set are Cantor sets.

Every finite itinerary tau picks out one interval on the line y = const;
the intervals for longer itineraries nest and shrink doubly exponentially.
Run: python3 demos/03_cantor_sections.py  (a few seconds)
"""

from fractions import Fraction

from wilkshift import PrecisionCtx
from wilkshift.cantor import box_count_line, interval_table, sandwich_bounds
from wilkshift.signs import all_strings

ctx = PrecisionCtx(300)
y = ctx.num("0.01")

for n in range(1, 4):
    table = interval_table(y, n, ctx)
    lower, upper = sandwich_bounds(y, n, ctx)
    print(f"n = {n}: widths between {ctx.mp.nstr(lower, 3)} and {ctx.mp.nstr(upper, 3)}")
    for tau in all_strings(n):
        b = table[tau]
        print(f"  {tau:>4}  [{ctx.mp.nstr(b.lo, 14)}, {ctx.mp.nstr(b.hi, 14)}]"
              f"  width {ctx.mp.nstr(b.width, 3)}")

# Box counts grow only like log(1/r): the section has dimension zero.
for k in (4, 8, 16):
    r = Fraction(1, 2**k)
    count, bound = box_count_line(y, r, ctx)
    print(f"r = 2^-{k}: {count} balls (bound {ctx.mp.nstr(bound, 3)})")
