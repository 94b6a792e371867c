import math

import pytest
from gmpy2 import mpq
from hypothesis import given, strategies as st

from liouville.errors import UnmaterializableError
from liouville.magnitude import Magnitude, mag_compare, mag_from_power
from liouville.schedule import (
    DigitSequence,
    ExponentSchedule,
    SpiffyNumber,
    epsilon_strong_check,
    evaluate_enclosure,
    liouville_exponent_lower,
    prop11_threshold,
    schedule_exponent,
    tail_bound,
    ternary_digits,
    truncate,
)

PAPER = ExponentSchedule.paper_tower()
FACT = ExponentSchedule.factorial(1)
digit_lists = st.lists(st.sampled_from([0, 2]), min_size=1, max_size=10)


def test_paper_exponents():
    assert [schedule_exponent(PAPER, n) for n in (1, 2, 3)] == [3, 27, 7625597484987]
    assert isinstance(PAPER.exponent(4), Magnitude)


def test_factorial_exponent():
    assert FACT.exponent(4) == 120


def test_custom_must_increase():
    with pytest.raises(ValueError):
        ExponentSchedule.custom([3, 3, 5])


def test_truncations():
    x = SpiffyNumber.paper()
    assert truncate(x, 1) == mpq(2, 27)
    assert truncate(x, 2) == mpq(564859072964, 7625597484987)
    assert truncate(SpiffyNumber(FACT, DigitSequence.all0()), 5) == 0
    with pytest.raises(UnmaterializableError):
        truncate(x, 3)


def test_tail_bound_examples():
    x = SpiffyNumber.paper()
    assert tail_bound(x, 1).refined.value == mpq(1, 3**26)
    t2 = tail_bound(x, 2).generic
    assert mag_compare(t2, mag_from_power(3, 1 - 7625597484987)) == 0
    y = SpiffyNumber(FACT, DigitSequence.all2().with_digit(2, 0))
    tb = tail_bound(y, 1)
    assert tb.refined_index == 3 and tb.refined.value == 3 * mpq(1, 3**24)
    assert tail_bound(SpiffyNumber(FACT, DigitSequence.constant(0, (2, 2))), 2).refined.is_zero()


def test_exponent_reports():
    assert liouville_exponent_lower(SpiffyNumber.paper(), 1).guaranteed == mpq(26, 3)
    assert liouville_exponent_lower(SpiffyNumber(FACT, DigitSequence.all2()), 4).guaranteed == mpq(719, 120)
    slow = SpiffyNumber(ExponentSchedule.custom(range(1, 12)), DigitSequence.all2())
    rep = liouville_exponent_lower(slow, 3)
    assert rep.guaranteed == 1 and not rep.liouville_grade


def test_epsilon_strong_transition():
    x = SpiffyNumber.paper()
    r1 = epsilon_strong_check(x, 1, 1)
    assert not r1.passed and r1.achieved == mpq(26, 3)
    assert abs(float(r1.required.mid) - 10.8625) < 1e-3
    r2 = epsilon_strong_check(x, 1, 2)
    assert r2.passed and abs(float(r2.required.mid) - 879.86) < 0.1
    assert abs(float(r2.achieved) - 2.824e11) < 1e9
    r0 = epsilon_strong_check(x, 0, 2)
    assert not r0.in_definition


def test_epsilon_strong_stays_true():
    x = SpiffyNumber.paper()
    assert epsilon_strong_check(x, 1, 2).passed
    assert epsilon_strong_check(x, 1, 3).passed


def test_prop11_thresholds():
    assert prop11_threshold(100, 1) == 33
    assert prop11_threshold(1, 1) == 6
    assert prop11_threshold(1, math.inf) == 6


def test_enclosures():
    z = evaluate_enclosure(SpiffyNumber(FACT, DigitSequence.all0()), 3)
    assert z.lower == z.upper == 0
    e = evaluate_enclosure(SpiffyNumber.paper(), 1)
    assert (e.lower, e.upper) == (mpq(2, 27), mpq(2, 27) + mpq(1, 3**26))
    f = evaluate_enclosure(SpiffyNumber(FACT, DigitSequence.all2()), 3)
    assert f.width <= 3 * mpq(1, 3**120)


@given(digit_lists, st.integers(1, 5))
def test_tail_bound_against_deep_truncation(prefix, m):
    x = SpiffyNumber(FACT, DigitSequence.periodic((2, 0), prefix))
    diff = truncate(x, m + 3) - truncate(x, m)
    tb = tail_bound(x, m)
    assert 0 <= diff <= tb.generic.value
    assert mag_compare(Magnitude.of(diff), tb.refined) <= 0


@given(digit_lists, st.integers(1, 6))
def test_truncations_step_exactly(prefix, m):
    x = SpiffyNumber(FACT, DigitSequence.periodic((0, 2), prefix))
    step = truncate(x, m + 1) - truncate(x, m)
    assert step in (0, 2 * mpq(1, 3 ** FACT.exponent(m + 1)))


@given(digit_lists, st.integers(1, 4))
def test_ternary_digits_are_cantor(prefix, m):
    x = SpiffyNumber(FACT, DigitSequence.periodic((2,), prefix))
    s = ternary_digits(x, m)
    pos = {FACT.exponent(n): x.digits.digit(n) for n in range(1, m + 1)}
    for i, ch in enumerate(s, start=1):
        assert int(ch) == pos.get(i, 0)


def test_spiffy_flag_is_structural():
    assert DigitSequence.all2().is_spiffy()
    assert not DigitSequence.constant(0, (2, 2)).is_spiffy()
    assert DigitSequence.generator(lambda n: 2 * (n % 2)).is_spiffy() is None


def test_json_round_trip():
    x = SpiffyNumber(FACT, DigitSequence.periodic((2, 0), (0, 2, 2)))
    assert SpiffyNumber.from_json(x.to_json()) == x
