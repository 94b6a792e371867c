"""Certified real enclosures with exact rational endpoints.

Endpoints are ``gmpy2.mpq`` values.  Transcendental functions are evaluated
with MPFR under directed rounding (down for lower endpoints, up for upper
endpoints) and the resulting binary floats are converted back to exact
rationals, so every returned enclosure contains the true value.
"""

from __future__ import annotations

import math
from fractions import Fraction

import gmpy2
from gmpy2 import mpfr, mpq, mpz

from .errors import DomainError, IncomparableError

DEFAULT_BUDGET = 256
GUARD_BITS = 16

MPQ = type(mpq(0))
MPZ = type(mpz(0))

# MPFR exponent range; inputs beyond this would overflow exp.
_EXP_ARG_LIMIT = 1 << 29


def rat(x) -> MPQ:
    """Coerce ``x`` to an exact ``mpq``.

    Accepts ints, ``mpz``/``mpq``, :class:`fractions.Fraction`, strings such
    as ``"2/27"`` and floats (converted exactly).
    """
    if isinstance(x, MPQ):
        return x
    if isinstance(x, (int, MPZ)):
        return mpq(x)
    if isinstance(x, Fraction):
        return mpq(x.numerator, x.denominator)
    if isinstance(x, str):
        return mpq(x.strip())
    if isinstance(x, float):
        if not math.isfinite(x):
            raise ValueError(f"cannot convert {x!r} to a rational")
        return mpq(x)
    raise TypeError(f"cannot convert {type(x).__name__} to a rational")


def rat_str(q) -> str:
    """Exact ``"num/den"`` decimal-digit string."""
    q = rat(q)
    return f"{q.numerator}/{q.denominator}"


def parse_rat(s: str) -> MPQ:
    if not isinstance(s, str):
        raise TypeError("rational must be encoded as a string")
    return mpq(s)


def floor_q(q) -> int:
    q = rat(q)
    return int(gmpy2.f_div(q.numerator, q.denominator))


def ceil_q(q) -> int:
    q = rat(q)
    return int(gmpy2.c_div(q.numerator, q.denominator))


def _ilog2(q: MPQ) -> int:
    """floor(log2|q|) up to one unit; q != 0."""
    q = abs(q)
    return q.numerator.bit_length() - q.denominator.bit_length()


def _context(prec: int, rounding):
    return gmpy2.context(
        precision=max(prec, 2),
        round=rounding,
        emax=gmpy2.get_emax_max(),
        emin=gmpy2.get_emin_min(),
    )


def _mpfr_apply(fn, x: MPQ, prec: int, up: bool) -> MPQ:
    """Evaluate monotone-increasing ``fn`` at ``x`` rounded in direction ``up``."""
    rounding = gmpy2.RoundUp if up else gmpy2.RoundDown
    with _context(prec, rounding):
        return mpq(fn(mpfr(x)))


def _loglog_bits(q: MPQ) -> int:
    # bits needed to hold |ln q|
    size = q.numerator.bit_length() + q.denominator.bit_length()
    return max(size, 1).bit_length()


def decimal_str(q, digits: int = 20, up: bool = False) -> str:
    """Directed-rounded fixed-point decimal string of ``q``."""
    q = rat(q)
    scaled = q * mpz(10) ** digits
    n = ceil_q(scaled) if up else floor_q(scaled)
    sign = "-" if n < 0 else ""
    n = abs(n)
    whole, frac = divmod(n, 10**digits)
    return f"{sign}{whole}.{frac:0{digits}d}"


class IntervalReal:
    """Closed interval ``[lower, upper]`` with rational endpoints.

    ``budget`` is the target number of bits of absolute width for results of
    transcendental operations.
    """

    __slots__ = ("lower", "upper", "budget")

    def __init__(self, lower, upper=None, budget: int = DEFAULT_BUDGET):
        lo = rat(lower)
        hi = lo if upper is None else rat(upper)
        if lo > hi:
            raise ValueError(f"empty interval [{lo}, {hi}]")
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", hi)
        object.__setattr__(self, "budget", int(budget))

    def __setattr__(self, name, value):
        raise AttributeError("IntervalReal is immutable")

    def __reduce__(self):
        return (IntervalReal, (self.lower, self.upper, self.budget))

    @classmethod
    def exact(cls, x, budget: int = DEFAULT_BUDGET) -> "IntervalReal":
        return cls(x, x, budget)

    # -- inspection ---------------------------------------------------------

    @property
    def width(self) -> MPQ:
        return self.upper - self.lower

    @property
    def mid(self) -> MPQ:
        return (self.lower + self.upper) / 2

    def is_exact(self) -> bool:
        return self.lower == self.upper

    def contains(self, x) -> bool:
        if isinstance(x, IntervalReal):
            return self.lower <= x.lower and x.upper <= self.upper
        x = rat(x)
        return self.lower <= x <= self.upper

    def overlaps(self, other: "IntervalReal") -> bool:
        return not (self.upper < other.lower or other.upper < self.lower)

    def compare(self, other) -> int:
        """Certified ordering: -1, 0 (both exact and equal) or 1.

        Raises :class:`IncomparableError` when the enclosures overlap.
        """
        other = _coerce(other, self.budget)
        if self.upper < other.lower:
            return -1
        if self.lower > other.upper:
            return 1
        if self.is_exact() and other.is_exact():
            return 0
        raise IncomparableError(f"enclosures overlap: {self} vs {other}")

    def certainly_lt(self, other) -> bool:
        other = _coerce(other, self.budget)
        return self.upper < other.lower

    def certainly_le(self, other) -> bool:
        other = _coerce(other, self.budget)
        return self.upper <= other.lower

    def certainly_gt(self, other) -> bool:
        other = _coerce(other, self.budget)
        return self.lower > other.upper

    def certainly_ge(self, other) -> bool:
        other = _coerce(other, self.budget)
        return self.lower >= other.upper

    def with_budget(self, budget: int) -> "IntervalReal":
        return IntervalReal(self.lower, self.upper, budget)

    def to_json(self) -> dict:
        return {"lower": rat_str(self.lower), "upper": rat_str(self.upper)}

    @classmethod
    def from_json(cls, data: dict, budget: int = DEFAULT_BUDGET) -> "IntervalReal":
        return cls(parse_rat(data["lower"]), parse_rat(data["upper"]), budget)

    def __repr__(self):
        if self.is_exact():
            return f"IntervalReal({rat_str(self.lower)})"
        return (
            f"IntervalReal([{decimal_str(self.lower, 12)}, "
            f"{decimal_str(self.upper, 12, up=True)}])"
        )

    def __eq__(self, other):
        if not isinstance(other, IntervalReal):
            return NotImplemented
        return self.lower == other.lower and self.upper == other.upper

    def __hash__(self):
        return hash((self.lower, self.upper))

    # -- arithmetic ---------------------------------------------------------

    def _tidy(self) -> "IntervalReal":
        """Round endpoints outward once denominators outgrow the budget."""
        if self.is_exact():
            return self
        keep = self.budget + 2 * GUARD_BITS
        if max(self.lower.denominator.bit_length(), self.upper.denominator.bit_length()) <= 2 * keep:
            return self
        top = max(abs(self.lower), abs(self.upper))
        shift = keep - _ilog2(top) if top else keep
        scale = mpq(2) ** shift
        lo = mpq(floor_q(self.lower * scale)) / scale
        hi = mpq(ceil_q(self.upper * scale)) / scale
        return IntervalReal(lo, hi, self.budget)

    def __add__(self, other):
        other = _coerce(other, self.budget)
        return IntervalReal(
            self.lower + other.lower, self.upper + other.upper, max(self.budget, other.budget)
        )._tidy()

    __radd__ = __add__

    def __neg__(self):
        return IntervalReal(-self.upper, -self.lower, self.budget)

    def __sub__(self, other):
        return self + (-_coerce(other, self.budget))

    def __rsub__(self, other):
        return _coerce(other, self.budget) - self

    def __mul__(self, other):
        other = _coerce(other, self.budget)
        products = (
            self.lower * other.lower,
            self.lower * other.upper,
            self.upper * other.lower,
            self.upper * other.upper,
        )
        return IntervalReal(min(products), max(products), max(self.budget, other.budget))._tidy()

    __rmul__ = __mul__

    def reciprocal(self) -> "IntervalReal":
        if self.lower <= 0 <= self.upper:
            raise DomainError(f"division by an enclosure containing zero: {self}")
        return IntervalReal(1 / self.upper, 1 / self.lower, self.budget)._tidy()

    def __truediv__(self, other):
        return self * _coerce(other, self.budget).reciprocal()

    def __rtruediv__(self, other):
        return _coerce(other, self.budget) * self.reciprocal()

    def __abs__(self):
        if self.lower >= 0:
            return self
        if self.upper <= 0:
            return -self
        return IntervalReal(0, max(-self.lower, self.upper), self.budget)

    def __pow__(self, n: int):
        if not isinstance(n, (int, MPZ)):
            return self.pow(n)
        n = int(n)
        if n < 0:
            return (self ** (-n)).reciprocal()
        if n == 0:
            return IntervalReal(1, 1, self.budget)
        lo, hi = self.lower**n, self.upper**n
        if n % 2 == 0:
            if self.lower >= 0:
                return IntervalReal(lo, hi, self.budget)._tidy()
            if self.upper <= 0:
                return IntervalReal(hi, lo, self.budget)._tidy()
            return IntervalReal(0, max(lo, hi), self.budget)._tidy()
        return IntervalReal(lo, hi, self.budget)._tidy()

    def hull(self, other: "IntervalReal") -> "IntervalReal":
        return IntervalReal(
            min(self.lower, other.lower), max(self.upper, other.upper), max(self.budget, other.budget)
        )

    def max_with(self, other) -> "IntervalReal":
        other = _coerce(other, self.budget)
        return IntervalReal(
            max(self.lower, other.lower), max(self.upper, other.upper), max(self.budget, other.budget)
        )

    # -- transcendental -----------------------------------------------------

    def exp(self) -> "IntervalReal":
        return interval_exp(self)

    def log(self) -> "IntervalReal":
        return interval_log(self)

    def pow(self, y) -> "IntervalReal":
        """``self ** y`` for a positive base and real exponent."""
        if isinstance(y, (int, MPZ)):
            return self ** int(y)
        y = _coerce(y, self.budget)
        if y.is_exact() and y.lower.denominator == 1:
            return self ** int(y.lower.numerator)
        return interval_exp(y * interval_log(self))

    def sqrt(self) -> "IntervalReal":
        if self.lower < 0:
            raise DomainError(f"sqrt of an enclosure with negative part: {self}")
        prec = self.budget + GUARD_BITS + max(0, _ilog2(self.upper) // 2 if self.upper else 0)
        return IntervalReal(
            _mpfr_apply(gmpy2.sqrt, self.lower, prec, up=False),
            _mpfr_apply(gmpy2.sqrt, self.upper, prec, up=True),
            self.budget,
        )


def _coerce(x, budget: int) -> IntervalReal:
    if isinstance(x, IntervalReal):
        return x
    return IntervalReal(x, x, budget)


def interval_exp(x, budget: int | None = None) -> IntervalReal:
    """Enclosure of ``exp`` over ``x``; width at most input amplification plus 2^-budget."""
    if not isinstance(x, IntervalReal):
        x = IntervalReal.exact(x, budget or DEFAULT_BUDGET)
    elif budget is not None:
        x = x.with_budget(budget)
    if x.is_exact() and x.lower == 0:
        return IntervalReal(1, 1, x.budget)
    if abs(x.lower) > _EXP_ARG_LIMIT or abs(x.upper) > _EXP_ARG_LIMIT:
        raise DomainError("exp argument outside the MPFR exponent range")
    out_bits = max(0, ceil_q(x.upper * 3 / 2) + 1)  # > upper / ln 2
    prec = x.budget + GUARD_BITS + out_bits

    def bound(q: MPQ, up: bool) -> MPQ:
        in_prec = prec + (max(0, _ilog2(q) + 1) if q else 0)
        rounding = gmpy2.RoundUp if up else gmpy2.RoundDown
        with _context(in_prec, rounding):
            arg = mpfr(q)
        with _context(prec, rounding):
            return mpq(gmpy2.exp(arg))

    return IntervalReal(bound(x.lower, False), bound(x.upper, True), x.budget)


def interval_log(x, budget: int | None = None) -> IntervalReal:
    """Enclosure of the natural log over ``x`` (``x.lower`` must be positive)."""
    if not isinstance(x, IntervalReal):
        x = IntervalReal.exact(x, budget or DEFAULT_BUDGET)
    elif budget is not None:
        x = x.with_budget(budget)
    if x.lower <= 0:
        raise DomainError(f"log of a non-positive enclosure: {x}")
    if x.is_exact() and x.lower == 1:
        return IntervalReal(0, 0, x.budget)
    prec = x.budget + GUARD_BITS + max(_loglog_bits(x.lower), _loglog_bits(x.upper))
    return IntervalReal(
        _mpfr_apply(gmpy2.log, x.lower, prec, up=False),
        _mpfr_apply(gmpy2.log, x.upper, prec, up=True),
        x.budget,
    )


def ln_int(n: int, budget: int = DEFAULT_BUDGET) -> IntervalReal:
    """Enclosure of ln(n) for a positive integer (any size)."""
    return interval_log(IntervalReal.exact(mpq(n), budget))


def lnln_int(n: int, budget: int = DEFAULT_BUDGET) -> IntervalReal:
    """Enclosure of ln(ln(n)) for an integer n >= 2."""
    if n < 2:
        raise DomainError("ln ln n needs n >= 2")
    inner = ln_int(n, budget + GUARD_BITS)
    return interval_log(inner).with_budget(budget)


def e_inv(budget: int = DEFAULT_BUDGET) -> IntervalReal:
    """Enclosure of 1/e."""
    return interval_exp(IntervalReal.exact(-1, budget))


def self_power_minimum(budget: int = DEFAULT_BUDGET) -> IntervalReal:
    """Enclosure of e^(-1/e), the global minimum of x^x."""
    return interval_exp(-e_inv(budget + GUARD_BITS)).with_budget(budget)
