import mpmath
import pytest
from gmpy2 import mpq
from hypothesis import given, strategies as st

from liouville.errors import DomainError, PrecisionInsufficientError, TrichotomyAmbiguousError
from liouville.interval import IntervalReal, e_inv, interval_exp, self_power_minimum
from liouville.selfpower import (
    derivative_bounds,
    hausdorff_series_partial,
    invert_self_power,
    invert_xlogx,
    non_liouville_scan,
    phi,
    phi_lipschitz,
    self_power,
    self_power_derivative,
)

from oracles import contains, mp, self_power as sp_oracle

unit = st.fractions(min_value=0, max_value=1, max_denominator=10**9).filter(lambda f: f > 0).map(lambda f: mpq(f.numerator, f.denominator))
upper_half = st.fractions(min_value=mpq(1, 2), max_value=1, max_denominator=10**9).map(lambda f: mpq(f.numerator, f.denominator))


def test_self_power_examples():
    assert self_power(1) == IntervalReal.exact(1)
    assert self_power(2) == IntervalReal.exact(4)
    m = self_power(e_inv())
    assert abs(float(m.mid) - 0.6922006276) < 1e-10


def test_derivative_bound_examples():
    d = derivative_bounds(1)
    assert d.lower.lower <= 1 <= d.lower.upper
    h = derivative_bounds(mpq(1, 2))
    assert abs(float(h.lower.mid) - 0.2170) < 1e-4 and h.upper == IntervalReal.exact(1)
    with pytest.warns(RuntimeWarning):
        derivative_bounds(e_inv().upper + mpq(1, 10**9))
    with pytest.raises(DomainError):
        derivative_bounds(mpq(1, 3))


def test_phi_lipschitz_examples():
    assert phi_lipschitz(e_inv()).upper == 1
    e2 = interval_exp(IntervalReal.exact(-2))
    m = phi_lipschitz(e2)
    assert m.lower <= 1 <= m.upper and m.width < mpq(1, 2**200)
    assert abs(float(phi_lipschitz(mpq(1, 20)).mid) - 1.9957) < 1e-4


def test_inversion_examples():
    (two,) = invert_self_power(4)
    assert two.lower <= 2 <= two.upper
    (c,) = invert_self_power(self_power_minimum(), assume_minimum=True)
    assert c.lower <= e_inv().upper and c.upper >= e_inv().lower
    with pytest.raises(TrichotomyAmbiguousError):
        invert_self_power(self_power_minimum())
    lo, hi = invert_self_power(mpq(4, 5))
    assert 0 < lo.upper < e_inv().lower < hi.lower < hi.upper < 1


def test_xlogx_examples():
    m = invert_xlogx(-e_inv(), "upper")
    assert abs(float(m.mid) - 0.36787944) < 1e-6
    one = invert_xlogx(0, "upper")
    assert one.lower <= 1 <= one.upper
    assert abs(float(invert_xlogx(mpq(-1, 5), "lower").mid) - 0.0787) < 1e-4
    assert abs(float(invert_xlogx(mpq(-1, 5), "upper").mid) - 0.7716) < 1e-4
    with pytest.raises(DomainError):
        invert_xlogx(mpq(-1, 2), "upper")
    with pytest.raises(DomainError):
        invert_xlogx(0, "lower")


@given(st.fractions(min_value=mpq(1, 100), max_value=4, max_denominator=10**6))
def test_inversion_trichotomy_and_roundtrip(f):
    y = mpq(f.numerator, f.denominator)
    mu = self_power_minimum()
    pre = invert_self_power(IntervalReal.exact(y, 200))
    expected = 0 if y < mu.lower else 1 if y >= 1 else 2
    assert len(pre) == expected
    for x in pre:
        back = self_power(x)
        assert back.lower - mpq(1, 2**100) <= y <= back.upper + mpq(1, 2**100)


@given(upper_half, upper_half)
def test_bi_lipschitz(x, y):
    d = derivative_bounds(mpq(1, 2))
    fx, fy = self_power(IntervalReal.exact(x)), self_power(IntervalReal.exact(y))
    diff = abs(fx - fy)
    tol = mpq(1, 2**128)
    assert d.lower.lower * abs(x - y) <= diff.upper + tol
    assert diff.lower <= abs(x - y) + tol


@given(upper_half)
def test_derivative_sandwich(x):
    d = derivative_bounds(mpq(1, 2))
    fp = self_power_derivative(IntervalReal.exact(x))
    tol = mpq(1, 2**128)
    assert d.lower.lower - tol <= fp.upper and fp.lower <= 1 + tol


@given(unit, unit)
def test_phi_lipschitz_property(a, b):
    delta = min(a, b)
    if delta >= 1:
        return
    m = phi_lipschitz(delta)
    gap = abs(phi(IntervalReal.exact(a)) - phi(IntervalReal.exact(b)))
    assert gap.lower <= m.upper * abs(a - b) + mpq(1, 2**128)


@given(st.fractions(max_value=0, min_value=-30, max_denominator=10**6), st.fractions(max_value=0, min_value=-30, max_denominator=10**6))
def test_exp_is_one_lipschitz_on_negatives(u, v):
    gap = abs(interval_exp(IntervalReal.exact(mpq(u.numerator, u.denominator))) - interval_exp(IntervalReal.exact(mpq(v.numerator, v.denominator))))
    assert gap.lower <= abs(mpq(u.numerator, u.denominator) - mpq(v.numerator, v.denominator)) + mpq(1, 2**200)


@given(st.fractions(min_value=mpq(-36, 100), max_value=mpq(-1, 100), max_denominator=10**6))
def test_xlogx_inverts_phi(f):
    u = mpq(f.numerator, f.denominator)
    for branch in ("lower", "upper"):
        x = invert_xlogx(u, branch)
        back = phi(x)
        assert back.lower - mpq(1, 2**100) <= u <= back.upper + mpq(1, 2**100)


def test_self_power_oracle():
    for q in (mpq(1, 3), mpq(1, 2), mpq(7, 10), mpq(3, 2)):
        assert contains(self_power(IntervalReal.exact(q)), sp_oracle(q))


def test_scan_examples():
    rep = non_liouville_scan(mpq(1, 2), 3, 50)
    assert rep.clean
    (xi,) = invert_self_power(mpq(3, 4))[1:]
    hit = non_liouville_scan(xi, 3, 10)
    assert [(v.a, v.b) for v in hit.violations] == [(3, 4)]
    assert hit.to_csv().splitlines()[0] == "a,b,gap_sign,certified_gap"
    empty = non_liouville_scan(mpq(1, 2), 3, 0)
    assert empty.to_csv() == "a,b,gap_sign,certified_gap\n" and empty.scanned == 0


def test_scan_tau_window_clears_neighbours():
    rep = non_liouville_scan(mpq(1, 2), 3, 30, window="tau")
    # only b = 1 is close enough: |2**-0.5 - 1| < 1**-3
    assert [(v.a, v.b) for v in rep.violations] == [(1, 1)]
    assert rep.cleared == rep.scanned - 1


def test_scan_reports_undecided_pairs():
    xi = IntervalReal(mpq(1, 2), mpq(1, 2) + mpq(1, 10**4), 64)
    with pytest.raises(PrecisionInsufficientError) as err:
        non_liouville_scan(xi, 3, 2000)
    assert err.value.pairs


def test_hausdorff_partials():
    h3 = hausdorff_series_partial(1, 3, (1, 100))
    assert h3.verdict == "convergent-regime"
    with mpmath.workdps(30):
        assert abs(mp(h3.value) - mpmath.nsum(lambda b: b**-2, [1, 100])) < mpmath.mpf(10) ** -25
    assert abs(float(h3.value) - 1.6350) < 1e-4
    assert hausdorff_series_partial(1, 2, (1, 10)).verdict == "divergent-regime"
    assert abs(float(hausdorff_series_partial(1, 4, (1, 100)).value) - 1.20201) < 1e-5
    frac = hausdorff_series_partial(mpq(5, 6), 3, (1, 50))
    with mpmath.workdps(100):
        ref = mpmath.fsum(mpmath.mpf(b) ** mpmath.mpf(-1.5) for b in range(1, 51))
    assert contains(frac.enclosure, ref, slack=mpmath.mpf(10) ** -90)
