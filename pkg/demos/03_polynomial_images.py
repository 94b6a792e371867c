"""
Integer polynomials of spiffy numbers
=====================================

Evaluate P at the level-m truncations.  The result R_m has denominator
dividing q_m^deg(P) and sits within 3 M t times the tail of P(x), so P(x)
is either rational or inherits a good approximation.
"""

from liouville import DigitSequence, ExponentSchedule, SpiffyNumber
from liouville.certify import poly_closure_certificate
from liouville.cli import fmt_rational
from liouville.magnitude import Magnitude, mag_log

x = SpiffyNumber.paper()
y = SpiffyNumber.paper(DigitSequence.all2().with_digit(2, 0))

# x and y differ only at level 2, so x - y is the single digit 2/3^27
c = poly_closure_certificate("X-Y", [x, y], 2)
print(fmt_rational(c.R), c.verdict)
q = 3**27
print(poly_closure_certificate(f"{q}*X-{q}*Y-2", [x, y], 2).R)

fact = ExponentSchedule.factorial(1)
a = SpiffyNumber(fact, DigitSequence.all2())
b = SpiffyNumber(fact, DigitSequence.periodic((2, 0)))
cert = poly_closure_certificate("X^2*Y-3*Y+1", [a, b], [1, 2, 3, 4])
for m, st in zip(cert.levels, cert.stages):
    print(m, st["verdict"], "M =", st["M"], "C =", st["C"], "log10 error ~", round(float(mag_log(Magnitude.from_json(st["error"])).mid) / 2.302585, 1))
