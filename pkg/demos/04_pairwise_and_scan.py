"""
Pairwise powers and the exclusion scan
======================================

Two spiffy numbers that agree through level m share the anchor a = r_m.
A Dirichlet approximation of log a and a Taylor polynomial give a
rational near x**y.  Separately, for a non-Liouville xi we can scan
rationals a/b near xi**xi and certify that none come within b**-tau.
"""

from gmpy2 import mpq

from liouville import DigitSequence, ExponentSchedule, SpiffyNumber
from liouville.certify import build_pairwise_certificate
from liouville.selfpower import hausdorff_series_partial, invert_self_power, non_liouville_scan

fact = ExponentSchedule.factorial(1)
x = SpiffyNumber(fact, DigitSequence.all2())
y = SpiffyNumber(fact, DigitSequence.all2().with_digit(5, 0))
cert = build_pairwise_certificate(x, y, (2, 3, 4))
for s in cert.stages:
    print(s.k, s.claims["L"], f"Q has {s.Q.bit_length()} bits", f"achieved {float(s.achieved_exponent.mid):.4f}")

# the two preimages of 4/5 under x**x, one on each side of 1/e
lo, hi = invert_self_power(mpq(4, 5))
print(float(lo.mid), float(hi.mid))

# (1/2)**(1/2) is far from every a/b with b <= 200 at tau = 3
rep = non_liouville_scan(mpq(1, 2), 3, 200)
print(rep.clean, rep.scanned, len(rep.violations))

# xi chosen so that xi**xi = 3/4 exactly: the scan reports the hit
(xi,) = invert_self_power(mpq(3, 4))[1:]
print(non_liouville_scan(xi, 3, 10).violations)

print(hausdorff_series_partial(mpq(1, 2), 3, (1, 1000)).verdict)
