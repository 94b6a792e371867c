"""
Spiffy numbers and their truncations
====================================

A spiffy number puts ternary digits 0 or 2 at sparse positions e_1 < e_2 < ...
Its truncations are rationals with denominator 3^e_m, and the gap to the
next nonzero digit controls how well they approximate.
"""

from gmpy2 import mpq

from liouville import DigitSequence, ExponentSchedule, SpiffyNumber
from liouville.magnitude import mag_log
from liouville.schedule import epsilon_strong_check, liouville_exponent_lower, tail_bound, truncate

# factorial positions e_n = (n+1)! keep every level small enough to write down
fact = ExponentSchedule.factorial(1)
x = SpiffyNumber(fact, DigitSequence.all2())

for m in range(1, 6):
    r = truncate(x, m)
    tb = tail_bound(x, m)
    rep = liouville_exponent_lower(x, m)
    print(f"m={m}  e_m={fact.exponent_int(m):>4}  r_m has {r.denominator.bit_length():>4} bit denominator"
          f"  log10 tail <= {float(mag_log(tb.refined).upper) / 2.302585:.1f}  exponent >= {float(rep.guaranteed):.4f}")

# the exponent guaranteed at level m is (e_(m+1) - 1)/e_m, which grows without bound
print(liouville_exponent_lower(x, 4).guaranteed == mpq(719, 120))

# A zero digit after level m tightens the tail: the next nonzero digit is further away.
y = SpiffyNumber(fact, DigitSequence.all2().with_digit(3, 0))
print(float(tail_bound(y, 2).generic.value), float(tail_bound(y, 2).refined.value))

# The original tower e_1 = 3, e_(n+1) = 3^e_n grows so fast that only the
# first two truncations are materializable; the rest live as tower magnitudes.
paper = SpiffyNumber.paper()
print(truncate(paper, 1), "|", tail_bound(paper, 2).refined)

# With eps = 1 the strong rate fails at m = 1 and holds from m = 2 on.
for m in (1, 2):
    rep = epsilon_strong_check(paper, 1, m)
    print(m, rep.passed, float(rep.required.mid))
