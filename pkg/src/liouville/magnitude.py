"""Exact rationals and iterated-exponent magnitudes.

A :class:`Magnitude` is a non-negative real kept in one of three shapes:

* level 0: an exact ``mpq`` value;
* level 1: ``exp(sign * X)`` where ``X`` is a :class:`LogLinear` form
  ``const + sum(c_i * atom_i) + slack`` over atoms ``ln n`` and ``ln ln n``;
* level k >= 2: ``exp(sign * B)`` where ``B`` is a level k-1 magnitude.

Powers such as ``3**-(3**27)`` stay level 1 with an exact exponent record,
so comparisons reduce to comparisons of logarithmic forms.  Logarithms of
integers are split over small primes, which makes equal forms cancel exactly;
otherwise signs are decided from certified enclosures with a doubling
precision budget, and an unresolved overlap raises
:class:`~liouville.errors.IncomparableError` instead of guessing.
"""

from __future__ import annotations

import math
from contextlib import contextmanager
from contextvars import ContextVar

import gmpy2
from gmpy2 import mpq, mpz

from .errors import DomainError, IncomparableError, LiouvilleError, UnmaterializableError
from .interval import (
    DEFAULT_BUDGET,
    MPQ,
    MPZ,
    IntervalReal,
    interval_exp,
    interval_log,
    ln_int,
    lnln_int,
    parse_rat,
    rat,
    rat_str,
)

DEFAULT_CAP_BITS = 1 << 22
MAX_BUDGET_FACTOR = 8

_CAP = ContextVar("materialization_cap_bits", default=DEFAULT_CAP_BITS)

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97)
_POWER_CHECK_BITS = 4096


def cap_bits() -> int:
    """Current materialization cap (bits of the largest exact integer)."""
    return _CAP.get()


@contextmanager
def materialization_cap(bits: int):
    """Temporarily change the materialization cap in the current context."""
    token = _CAP.set(int(bits))
    try:
        yield
    finally:
        _CAP.reset(token)


def fits_cap(bits) -> bool:
    return bits <= cap_bits()


def power_bits(base: int, exponent) -> float:
    """Approximate bit length of ``base ** exponent``."""
    return float(exponent) * math.log2(base)


# ---------------------------------------------------------------------------
# logarithmic linear forms
# ---------------------------------------------------------------------------


def _perfect_power(n: MPZ) -> tuple[MPZ, int]:
    if n.bit_length() > _POWER_CHECK_BITS or not gmpy2.is_power(n):
        return n, 1
    for k in range(n.bit_length(), 1, -1):
        root, exact = gmpy2.iroot(n, k)
        if exact:
            base, inner = _perfect_power(root)
            return base, inner * k
    return n, 1


def _int_atoms(n) -> dict:
    n = mpz(n)
    if n < 1:
        raise DomainError("logarithm of a non-positive integer")
    atoms: dict = {}
    for p in _SMALL_PRIMES:
        if n == 1:
            break
        if n % p == 0:
            n, k = gmpy2.remove(n, p)
            atoms[("ln", p)] = atoms.get(("ln", p), 0) + k
    if n > 1:
        base, k = _perfect_power(n)
        key = ("ln", int(base))
        atoms[key] = atoms.get(key, 0) + k
    return atoms


def _atom_enclosure(atom, budget: int) -> IntervalReal:
    kind, n = atom
    if kind == "ln":
        return ln_int(n, budget)
    return lnln_int(n, budget)


class LogLinear:
    """Real number ``const + sum(coeff * atom) + [slack_lo, slack_hi]``.

    Atoms are ``("ln", n)`` or ``("lnln", n)``; coefficients are exact
    rationals.  A zero-width slack makes the form exact.
    """

    __slots__ = ("terms", "const", "slack_lo", "slack_hi")

    def __init__(self, terms=(), const=0, slack=(0, 0)):
        merged: dict = {}
        items = terms.items() if isinstance(terms, dict) else terms
        for atom, c in items:
            kind, n = atom
            if kind not in ("ln", "lnln"):
                raise ValueError(f"unknown atom kind {kind!r}")
            key = (kind, int(n))
            merged[key] = merged.get(key, mpq(0)) + rat(c)
        object.__setattr__(
            self, "terms", tuple(sorted((k, v) for k, v in merged.items() if v != 0))
        )
        object.__setattr__(self, "const", rat(const))
        lo, hi = rat(slack[0]), rat(slack[1])
        if lo > hi:
            raise ValueError("slack interval is empty")
        object.__setattr__(self, "slack_lo", lo)
        object.__setattr__(self, "slack_hi", hi)

    def __setattr__(self, name, value):
        raise AttributeError("LogLinear is immutable")

    @classmethod
    def constant(cls, c) -> "LogLinear":
        return cls(const=c)

    @classmethod
    def ln(cls, n) -> "LogLinear":
        """ln of a positive integer, split over small prime factors."""
        return cls(_int_atoms(n))

    @classmethod
    def lnln(cls, n) -> "LogLinear":
        n = int(n)
        base, k = _perfect_power(mpz(n))
        if k == 1:
            return cls({("lnln", n): 1})
        # ln ln(b^k) = ln k + ln ln b
        return cls.ln(k) + cls.lnln(int(base))

    @classmethod
    def ln_rational(cls, q) -> "LogLinear":
        q = rat(q)
        if q <= 0:
            raise DomainError("logarithm of a non-positive rational")
        return cls.ln(q.numerator) - cls.ln(q.denominator)

    @classmethod
    def from_interval(cls, x: IntervalReal) -> "LogLinear":
        return cls(slack=(x.lower, x.upper))

    def is_exact(self) -> bool:
        return self.slack_lo == self.slack_hi

    def is_zero(self) -> bool:
        return not self.terms and self.const == 0 and self.slack_lo == 0 and self.slack_hi == 0

    def __add__(self, other: "LogLinear") -> "LogLinear":
        if not isinstance(other, LogLinear):
            other = LogLinear.constant(other)
        merged = dict(self.terms)
        for k, v in other.terms:
            merged[k] = merged.get(k, mpq(0)) + v
        return LogLinear(
            merged,
            self.const + other.const,
            (self.slack_lo + other.slack_lo, self.slack_hi + other.slack_hi),
        )

    def __neg__(self) -> "LogLinear":
        return LogLinear([(k, -v) for k, v in self.terms], -self.const, (-self.slack_hi, -self.slack_lo))

    def __sub__(self, other: "LogLinear") -> "LogLinear":
        if not isinstance(other, LogLinear):
            other = LogLinear.constant(other)
        return self + (-other)

    def scale(self, c) -> "LogLinear":
        c = rat(c)
        lo, hi = sorted((self.slack_lo * c, self.slack_hi * c))
        return LogLinear([(k, v * c) for k, v in self.terms], self.const * c, (lo, hi))

    def widen(self, lo, hi) -> "LogLinear":
        return LogLinear(self.terms, self.const, (self.slack_lo + rat(lo), self.slack_hi + rat(hi)))

    def enclosure(self, budget: int = DEFAULT_BUDGET) -> IntervalReal:
        total = IntervalReal(self.const + self.slack_lo, self.const + self.slack_hi, budget)
        extra = len(self.terms).bit_length() + 2
        for atom, c in self.terms:
            bits = budget + extra + max(0, c.numerator.bit_length() - c.denominator.bit_length() + 1)
            total = total + _atom_enclosure(atom, bits) * c
        return IntervalReal(total.lower, total.upper, budget)

    def sign(self, budget: int = DEFAULT_BUDGET, max_budget: int | None = None) -> int:
        """Certified sign; 0 only when the form is structurally zero."""
        if self.is_zero():
            return 0
        if not self.terms:
            lo, hi = self.const + self.slack_lo, self.const + self.slack_hi
            if lo > 0:
                return 1
            if hi < 0:
                return -1
            if lo == hi == 0:
                return 0
            raise IncomparableError("logarithmic form straddles zero within its slack")
        max_budget = max_budget or MAX_BUDGET_FACTOR * budget
        b = budget
        while b <= max_budget:
            enc = self.enclosure(b)
            if enc.lower > 0:
                return 1
            if enc.upper < 0:
                return -1
            b *= 2
        raise IncomparableError(f"cannot separate logarithmic form from zero at {max_budget} bits")

    def upper_abs(self, budget: int = DEFAULT_BUDGET) -> MPQ:
        enc = self.enclosure(budget)
        return max(abs(enc.lower), abs(enc.upper))

    def to_json(self) -> dict:
        return {
            "terms": [[kind, str(n), rat_str(c)] for (kind, n), c in self.terms],
            "const": rat_str(self.const),
            "slack": [rat_str(self.slack_lo), rat_str(self.slack_hi)],
        }

    @classmethod
    def from_json(cls, data: dict) -> "LogLinear":
        terms = [((kind, int(n)), parse_rat(c)) for kind, n, c in data["terms"]]
        return cls(terms, parse_rat(data["const"]), tuple(parse_rat(s) for s in data["slack"]))

    def __eq__(self, other):
        if not isinstance(other, LogLinear):
            return NotImplemented
        return (
            self.terms == other.terms
            and self.const == other.const
            and self.slack_lo == other.slack_lo
            and self.slack_hi == other.slack_hi
        )

    def __hash__(self):
        return hash((self.terms, self.const, self.slack_lo, self.slack_hi))

    def __repr__(self):
        parts = [f"{c}*{kind}({n})" for (kind, n), c in self.terms]
        if self.const or not parts:
            parts.append(str(self.const))
        text = " + ".join(parts)
        if not self.is_exact():
            text += f" + [{float(self.slack_lo):.3g}, {float(self.slack_hi):.3g}]"
        return f"LogLinear({text})"


class _Huge:
    """The real ``sign * value(mag)`` for a magnitude too large to materialize."""

    __slots__ = ("sign", "mag")

    def __init__(self, sign: int, mag: "Magnitude"):
        self.sign = sign
        self.mag = mag


# ---------------------------------------------------------------------------
# magnitudes
# ---------------------------------------------------------------------------


class Magnitude:
    """Non-negative real in iterated-exponent form (see module docstring)."""

    __slots__ = ("level", "sign", "body")

    def __init__(self, level: int, sign: int, body):
        if level == 0:
            body = rat(body)
            if body < 0:
                raise DomainError("magnitudes are non-negative")
            sign = 1
        elif level == 1:
            if not isinstance(body, LogLinear):
                raise TypeError("level-1 body must be a LogLinear form")
        else:
            if not isinstance(body, Magnitude) or body.level != level - 1:
                raise TypeError(f"level-{level} body must be a level-{level - 1} magnitude")
        if sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        object.__setattr__(self, "level", level)
        object.__setattr__(self, "sign", sign)
        object.__setattr__(self, "body", body)

    def __setattr__(self, name, value):
        raise AttributeError("Magnitude is immutable")

    @classmethod
    def of(cls, q) -> "Magnitude":
        return cls(0, 1, q)

    def is_zero(self) -> bool:
        return self.level == 0 and self.body == 0

    @property
    def value(self) -> MPQ:
        """Exact value of a level-0 magnitude."""
        if self.level != 0:
            raise UnmaterializableError(f"level-{self.level} magnitude has no exact rational value")
        return self.body

    def __eq__(self, other):
        if not isinstance(other, Magnitude):
            return NotImplemented
        return self.level == other.level and self.sign == other.sign and self.body == other.body

    def __hash__(self):
        return hash((self.level, self.sign, self.body))

    def __repr__(self):
        if self.level == 0:
            q = self.body
            if q.denominator.bit_length() > 80 or q.numerator.bit_length() > 80:
                return f"Magnitude(~2^{q.numerator.bit_length() - q.denominator.bit_length()})"
            return f"Magnitude({rat_str(q)})"
        s = "-" if self.sign < 0 else "+"
        return f"Magnitude(level={self.level}, exp({s}{self.body!r}))"

    def __lt__(self, other):
        return mag_compare(self, _as_mag(other)) < 0

    def __le__(self, other):
        return mag_compare(self, _as_mag(other)) <= 0

    def __gt__(self, other):
        return mag_compare(self, _as_mag(other)) > 0

    def __ge__(self, other):
        return mag_compare(self, _as_mag(other)) >= 0

    def __mul__(self, other):
        return mag_mul(self, _as_mag(other))

    __rmul__ = __mul__

    def to_json(self) -> dict:
        if self.level == 0:
            body = rat_str(self.body)
        else:
            body = self.body.to_json()
        return {"level": self.level, "sign": self.sign, "body": body}

    @classmethod
    def from_json(cls, data: dict) -> "Magnitude":
        level = int(data["level"])
        sign = int(data["sign"])
        if level == 0:
            return cls(0, sign, parse_rat(data["body"]))
        if level == 1:
            return cls(1, sign, LogLinear.from_json(data["body"]))
        return cls(level, sign, cls.from_json(data["body"]))


ZERO = Magnitude.of(0)
ONE = Magnitude.of(1)


def _as_mag(x) -> Magnitude:
    if isinstance(x, Magnitude):
        return x
    return Magnitude.of(x)


def _materialize(form: LogLinear):
    """Exact rational for an integral product of integer powers, if under the cap."""
    if form.const != 0 or not form.is_exact():
        return None
    num_bits = den_bits = 0.0
    for (kind, n), c in form.terms:
        if kind != "ln" or c.denominator != 1:
            return None
        if c > 0:
            num_bits += power_bits(n, c)
        else:
            den_bits += power_bits(n, -c)
    if not fits_cap(max(num_bits, den_bits)):
        return None
    num, den = mpz(1), mpz(1)
    for (_, n), c in form.terms:
        e = int(c.numerator)
        if e > 0:
            num *= mpz(n) ** e
        else:
            den *= mpz(n) ** (-e)
    return mpq(num, den)


def _exp_lin(form: LogLinear) -> Magnitude:
    if form.is_zero():
        return ONE
    exact = _materialize(form)
    if exact is not None:
        return Magnitude.of(exact)
    try:
        s = form.sign(64, 256)
    except IncomparableError:
        s = 1
    if s < 0:
        return Magnitude(1, -1, -form)
    return Magnitude(1, 1, form)


def _exp_real(r) -> Magnitude:
    if isinstance(r, LogLinear):
        return _exp_lin(r)
    if r.mag.level == 0:
        return _exp_lin(LogLinear.constant(r.sign * r.mag.body))
    return Magnitude(r.mag.level + 1, r.sign, r.mag)


def _lnform(m: Magnitude):
    if m.level == 0:
        return LogLinear.ln_rational(m.body)
    if m.level == 1:
        return m.body if m.sign > 0 else -m.body
    return _Huge(m.sign, m.body)


def _is_exact(m: Magnitude) -> bool:
    if m.level == 0:
        return True
    if m.level == 1:
        return m.body.is_exact()
    return _is_exact(m.body)


def mag_enclosure(m: Magnitude, budget: int = DEFAULT_BUDGET) -> IntervalReal:
    """Enclosure of the value; only sensible for moderately sized magnitudes."""
    if m.level == 0:
        return IntervalReal.exact(m.body, budget)
    if m.level == 1:
        inner = m.body.enclosure(budget)
    else:
        inner = mag_enclosure(m.body, budget)
    if m.sign < 0:
        inner = -inner
    return interval_exp(inner)


def mag_log(m: Magnitude, budget: int = DEFAULT_BUDGET) -> IntervalReal:
    """Enclosure of ln(value) for magnitudes up to level 1."""
    if m.is_zero():
        raise DomainError("log of zero magnitude")
    if m.level == 0:
        return interval_log(IntervalReal.exact(m.body, budget))
    if m.level == 1:
        return _lnform(m).enclosure(budget)
    raise UnmaterializableError("logarithm of a level >= 2 magnitude is itself astronomically large")


def _cmp_huge_lin(h: _Huge, form: LogLinear, budget: int) -> int:
    bound = form.upper_abs(budget)
    if mag_compare(h.mag, Magnitude.of(bound), budget) > 0:
        return h.sign
    enc = mag_enclosure(h.mag, budget)
    if h.sign < 0:
        enc = -enc
    return (LogLinear.from_interval(enc) - form).sign(budget)


def _compare_real(a, b, budget: int) -> int:
    if isinstance(a, LogLinear) and isinstance(b, LogLinear):
        return (a - b).sign(budget)
    if isinstance(a, _Huge) and isinstance(b, LogLinear):
        return _cmp_huge_lin(a, b, budget)
    if isinstance(a, LogLinear) and isinstance(b, _Huge):
        return -_cmp_huge_lin(b, a, budget)
    if a.sign != b.sign:
        return a.sign
    return a.sign * mag_compare(a.mag, b.mag, budget)


def mag_compare(a: Magnitude, b: Magnitude, budget: int = DEFAULT_BUDGET) -> int:
    """Total order on magnitudes: -1, 0 or 1.

    Exact for two level-0 operands; otherwise decided in log space and
    raises :class:`IncomparableError` on an unresolved overlap.
    """
    a, b = _as_mag(a), _as_mag(b)
    if a.is_zero() or b.is_zero():
        return (not a.is_zero()) - (not b.is_zero())
    if a.level == 0 and b.level == 0:
        return (a.body > b.body) - (a.body < b.body)
    if a == b and _is_exact(a):
        return 0
    return _compare_real(_lnform(a), _lnform(b), budget)


def _add_small(m: Magnitude, delta: LogLinear, budget: int) -> Magnitude:
    """Magnitude of ``value(m) + value(delta)`` for |delta| much smaller than m."""
    if m.level == 0:
        if not delta.terms and delta.is_exact():
            return Magnitude.of(m.body + delta.const)
        enc = delta.enclosure(budget) + m.body
        if enc.lower <= 0:
            raise DomainError("sum is not certifiably positive")
        return _exp_lin(LogLinear.from_interval(interval_log(enc)))
    d_enc = delta.enclosure(budget)
    bound = max(abs(d_enc.lower), abs(d_enc.upper))
    if bound == 0:
        return m
    k = budget
    if mag_compare(m, Magnitude.of(bound * mpq(2) ** k), budget) >= 0:
        eps = mpq(2) ** (1 - k)
        lo = -eps if d_enc.lower < 0 else mpq(0)
        hi = eps if d_enc.upper > 0 else mpq(0)
        eta = LogLinear(slack=(lo, hi))
        r = _lnform(m)
        if isinstance(r, LogLinear):
            return _exp_lin(r + eta)
        return _exp_real(_Huge(r.sign, _add_small(r.mag, eta.scale(r.sign), budget)))
    enc = mag_enclosure(m, budget) + d_enc
    if enc.lower <= 0:
        raise DomainError("sum is not certifiably positive")
    return _exp_lin(LogLinear.from_interval(interval_log(enc)))


def _add_reals(a, b, budget: int):
    if isinstance(a, LogLinear) and isinstance(b, LogLinear):
        return a + b
    if isinstance(a, LogLinear):
        a, b = b, a
    if isinstance(b, LogLinear):
        return _Huge(a.sign, _add_small(a.mag, b.scale(a.sign), budget))
    raise UnmaterializableError("product of two level >= 2 magnitudes is not representable")


def mag_mul(a: Magnitude, b: Magnitude, budget: int = DEFAULT_BUDGET) -> Magnitude:
    a, b = _as_mag(a), _as_mag(b)
    if a.is_zero() or b.is_zero():
        return ZERO
    if a.level == 0 and b.level == 0:
        p = a.body * b.body
        if fits_cap(max(p.numerator.bit_length(), p.denominator.bit_length())):
            return Magnitude.of(p)
    return _exp_real(_add_reals(_lnform(a), _lnform(b), budget))


def mag_pow(a: Magnitude, c, budget: int = DEFAULT_BUDGET) -> Magnitude:
    """``a ** c`` for an exact rational exponent ``c``."""
    a, c = _as_mag(a), rat(c)
    if c == 0:
        return ONE
    if a.is_zero():
        if c < 0:
            raise DomainError("negative power of zero")
        return ZERO
    if a.level == 0 and c.denominator == 1:
        e = int(c.numerator)
        q = a.body
        size = max(q.numerator.bit_length(), q.denominator.bit_length()) * abs(e)
        if fits_cap(size):
            return Magnitude.of(q**e)
    r = _lnform(a)
    if isinstance(r, LogLinear):
        return _exp_lin(r.scale(c))
    sign = r.sign if c > 0 else -r.sign
    return _exp_real(_Huge(sign, mag_mul(r.mag, Magnitude.of(abs(c)), budget)))


def mag_from_power(base: int, exponent, sign: int = 1, budget: int = DEFAULT_BUDGET) -> Magnitude:
    """``base ** (sign * exponent)`` in the lowest level able to hold it.

    ``exponent`` is an integer/rational or a (huge) :class:`Magnitude`.
    Level-0 results are exact whenever they fit the materialization cap.
    """
    base = int(base)
    if base < 2:
        raise DomainError("base must be >= 2")
    if not isinstance(exponent, Magnitude):
        e = rat(exponent) * sign
        return _exp_lin(LogLinear.ln(base).scale(e))
    if exponent.level == 0:
        return _exp_lin(LogLinear.ln(base).scale(exponent.body * sign))
    r = _lnform(exponent)
    offset = LogLinear.lnln(base)
    if isinstance(r, LogLinear):
        scaled = _exp_lin(r + offset)
    else:
        scaled = _exp_real(_Huge(r.sign, _add_small(r.mag, offset.scale(r.sign), budget)))
    return _exp_real(_Huge(sign, scaled))


def mag_add_int(m: Magnitude, k: int, budget: int = DEFAULT_BUDGET) -> Magnitude:
    """``value(m) + k`` for a (typically huge) magnitude and a small integer."""
    if m.level == 0:
        return Magnitude.of(m.body + k)
    return _add_small(m, LogLinear.constant(k), budget)


def mag_sum(terms, budget: int = DEFAULT_BUDGET) -> Magnitude:
    """Deterministic certified upper bound for the sum of magnitudes.

    Level-0 terms are added exactly.  Deeper terms contribute either a
    relative ``2^-budget`` slack on the exact part (when negligible) or a
    count-times-maximum bound.
    """
    terms = [_as_mag(t) for t in terms]
    exact = sum((t.body for t in terms if t.level == 0), mpq(0))
    deep = [t for t in terms if t.level > 0]
    if not deep:
        return Magnitude.of(exact)
    top = deep[0]
    for t in deep[1:]:
        if mag_compare(t, top, budget) > 0:
            top = t
    k = len(deep)
    if exact == 0:
        return top if k == 1 else mag_mul(top, Magnitude.of(k), budget)
    slack = exact * mpq(2) ** (-budget)
    if mag_compare(mag_mul(top, Magnitude.of(k), budget), Magnitude.of(slack), budget) <= 0:
        return Magnitude.of(exact + slack)
    if mag_compare(top, Magnitude.of(exact), budget) >= 0:
        return mag_mul(top, Magnitude.of(k + 1), budget)
    return Magnitude.of(exact * (k + 1))


def mag_leq_power(m, Q, N, budget: int = DEFAULT_BUDGET, strict: bool = False) -> bool:
    """Decide ``m <= Q**-N`` (``<`` when ``strict``) in exponent space.

    ``N`` may be an integer, a rational or an :class:`IntervalReal`; for an
    enclosure the answer must hold across the whole enclosure.
    """
    m, Q = _as_mag(m), _as_mag(Q)
    if mag_compare(Q, ONE, budget) <= 0:
        raise DomainError("mag_leq_power needs Q > 1")
    if isinstance(N, IntervalReal):
        if mag_leq_power(m, Q, N.upper, budget, strict):
            return True
        if not mag_leq_power(m, Q, N.lower, budget, strict):
            return False
        raise IncomparableError("exponent enclosure straddles the decision boundary")
    if m.is_zero():
        return True
    c = mag_compare(m, mag_pow(Q, -rat(N), budget), budget)
    return c < 0 if strict else c <= 0


def upper_rational(m: Magnitude, bits: int = DEFAULT_BUDGET) -> MPQ:
    """A rational upper bound for ``value(m)``; tiny values collapse to ``2^-bits``."""
    if m.level == 0:
        return m.body
    floor_bound = mpq(1, 1 << bits)
    if mag_compare(m, Magnitude.of(floor_bound), bits) <= 0:
        return floor_bound
    return mag_enclosure(m, bits).upper


def neg_log_ratio(err: Magnitude, log_base: IntervalReal, budget: int = DEFAULT_BUDGET):
    """Achieved exponent ``-ln(err) / log_base``.

    Returns an :class:`IntervalReal` when ``err`` is at most level 1, else
    ``None`` (the exponent is astronomically large).
    """
    if err.is_zero():
        return None
    if err.level >= 2:
        return None
    return -mag_log(err, budget) / log_base


__all__ = [
    "DEFAULT_CAP_BITS",
    "LogLinear",
    "Magnitude",
    "ONE",
    "ZERO",
    "cap_bits",
    "fits_cap",
    "mag_add_int",
    "mag_compare",
    "mag_enclosure",
    "mag_from_power",
    "mag_leq_power",
    "mag_log",
    "mag_mul",
    "mag_pow",
    "mag_sum",
    "materialization_cap",
    "neg_log_ratio",
    "upper_rational",
]
