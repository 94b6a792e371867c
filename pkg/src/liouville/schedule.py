"""Exponent schedules, {0,2} digit sequences and spiffy numbers.

A spiffy number is ``x = sum(a_n * 3**-e_n)`` with digits ``a_n`` in {0, 2}
placed at the positions of a strictly increasing exponent schedule
``e_1 < e_2 < ...``.  Truncations ``r_m`` are exact rationals with
denominator ``3**e_m``; tail bounds are magnitudes, so levels whose
denominators cannot be materialized still get usable error bounds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

import gmpy2
from gmpy2 import mpq, mpz

from .errors import DomainError, UnmaterializableError
from .interval import DEFAULT_BUDGET, MPQ, IntervalReal, interval_exp, interval_log, rat, rat_str
from .magnitude import (
    ZERO,
    Magnitude,
    fits_cap,
    mag_add_int,
    mag_compare,
    mag_from_power,
    mag_leq_power,
    mag_mul,
    power_bits,
    upper_rational,
)

_RULE_VALIDATION_TERMS = 8
_GENERATOR_SEARCH = 64


# ---------------------------------------------------------------------------
# exponent schedules
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _tower_term(base: int, first: int, n: int):
    if n == 1:
        return first
    prev = _tower_term(base, first, n - 1)
    if isinstance(prev, int) and fits_cap(power_bits(base, prev)):
        return base**prev
    return mag_from_power(base, prev)


@dataclass(frozen=True)
class ExponentSchedule:
    """Strictly increasing exponent sequence ``e_1 < e_2 < ...``.

    Use the constructors :meth:`paper_tower`, :meth:`tower`,
    :meth:`factorial`, :meth:`custom` and :meth:`from_rule`.
    """

    kind: str
    base: int = 3
    first: int = 3
    offset: int = 1
    values: tuple = ()
    rule: Callable | None = field(default=None, compare=False, repr=False)
    name: str = ""

    @classmethod
    def paper_tower(cls) -> "ExponentSchedule":
        """e_1 = 3, e_{n+1} = 3**e_n."""
        return cls("paper_tower", base=3, first=3)

    @classmethod
    def tower(cls, base: int, first: int) -> "ExponentSchedule":
        if base < 2 or first < 2:
            raise ValueError("tower schedules need base >= 2 and e_1 >= 2")
        if base == 3 and first == 3:
            return cls.paper_tower()
        return cls("tower", base=base, first=first)

    @classmethod
    def factorial(cls, offset: int = 1) -> "ExponentSchedule":
        """e_n = (n + offset)!"""
        if offset < 0:
            raise ValueError("factorial offset must be non-negative")
        return cls("factorial", offset=offset)

    @classmethod
    def custom(cls, values) -> "ExponentSchedule":
        vals = tuple(int(v) for v in values)
        if not vals:
            raise ValueError("custom schedule needs at least one exponent")
        if vals[0] < 1 or any(b <= a for a, b in zip(vals, vals[1:])):
            raise ValueError("custom schedule must be positive and strictly increasing")
        return cls("custom", values=vals)

    @classmethod
    def from_rule(cls, rule: Callable[[int], int], name: str = "rule") -> "ExponentSchedule":
        prev = 0
        for n in range(1, _RULE_VALIDATION_TERMS + 1):
            e = rule(n)
            if e <= prev:
                raise ValueError(f"rule schedule not strictly increasing at n={n}")
            prev = e
        return cls("rule", rule=rule, name=name)

    def exponent(self, n: int):
        """``e_n`` as an int, or a level >= 1 :class:`Magnitude` past the cap."""
        if n < 1:
            raise DomainError("schedule index starts at 1")
        if self.kind in ("paper_tower", "tower"):
            return _tower_term(self.base, self.first, n)
        if self.kind == "factorial":
            return math.factorial(n + self.offset)
        if self.kind == "custom":
            if n > len(self.values):
                raise UnmaterializableError(f"custom schedule has only {len(self.values)} terms")
            return self.values[n - 1]
        e = int(self.rule(n))
        if n > 1 and e <= int(self.rule(n - 1)):
            raise ValueError(f"rule schedule not strictly increasing at n={n}")
        return e

    def exponent_int(self, n: int) -> int:
        e = self.exponent(n)
        if not isinstance(e, int):
            raise UnmaterializableError(f"e_{n} is too large to materialize")
        return e

    def __len__(self):
        raise TypeError("schedules are infinite unless custom; use .values")

    def to_json(self) -> dict:
        if self.kind == "paper_tower":
            return {"kind": "paper_tower"}
        if self.kind == "tower":
            return {"kind": "tower", "base": str(self.base), "first": str(self.first)}
        if self.kind == "factorial":
            return {"kind": "factorial", "offset": str(self.offset)}
        if self.kind == "custom":
            return {"kind": "custom", "values": [str(v) for v in self.values]}
        raise ValueError(f"rule schedule {self.name!r} is not serializable")

    @classmethod
    def from_json(cls, data: dict) -> "ExponentSchedule":
        kind = data["kind"]
        if kind == "paper_tower":
            return cls.paper_tower()
        if kind == "tower":
            return cls.tower(int(data["base"]), int(data["first"]))
        if kind == "factorial":
            return cls.factorial(int(data.get("offset", 1)))
        if kind == "custom":
            return cls.custom(int(v) for v in data["values"])
        raise ValueError(f"unknown schedule kind {kind!r}")


def schedule_exponent(s: ExponentSchedule, n: int):
    return s.exponent(n)


# ---------------------------------------------------------------------------
# digit sequences
# ---------------------------------------------------------------------------


def _check_digits(ds):
    for d in ds:
        if d not in (0, 2):
            raise ValueError(f"digits must be 0 or 2, got {d!r}")


@dataclass(frozen=True)
class DigitSequence:
    """Explicit prefix followed by a constant, periodic or generated tail."""

    prefix: tuple = ()
    tail: str = "periodic"
    pattern: tuple = (2,)
    rule: Callable | None = field(default=None, compare=False, repr=False)
    name: str = ""

    def __post_init__(self):
        _check_digits(self.prefix)
        if self.tail == "periodic":
            if not self.pattern:
                raise ValueError("periodic tail needs a non-empty pattern")
            _check_digits(self.pattern)
        elif self.tail != "generator":
            raise ValueError(f"unknown tail rule {self.tail!r}")

    @classmethod
    def constant(cls, digit: int, prefix=()) -> "DigitSequence":
        return cls(tuple(prefix), "periodic", (digit,))

    @classmethod
    def all2(cls) -> "DigitSequence":
        return cls.constant(2)

    @classmethod
    def all0(cls) -> "DigitSequence":
        return cls.constant(0)

    @classmethod
    def periodic(cls, pattern, prefix=()) -> "DigitSequence":
        return cls(tuple(prefix), "periodic", tuple(pattern))

    @classmethod
    def generator(cls, rule: Callable[[int], int], prefix=(), name: str = "rule") -> "DigitSequence":
        return cls(tuple(prefix), "generator", (), rule, name)

    def digit(self, n: int) -> int:
        if n < 1:
            raise DomainError("digit index starts at 1")
        if n <= len(self.prefix):
            return self.prefix[n - 1]
        k = n - len(self.prefix)
        if self.tail == "periodic":
            return self.pattern[(k - 1) % len(self.pattern)]
        d = int(self.rule(n))
        _check_digits((d,))
        return d

    def digits(self, m: int) -> tuple:
        return tuple(self.digit(n) for n in range(1, m + 1))

    def is_spiffy(self):
        """True/False from the tail rule; None for generated tails (undecided)."""
        if self.tail == "periodic":
            return 2 in self.pattern
        return None

    def next_two(self, m: int):
        """Index of the first digit 2 after position ``m``.

        Returns None when the tail is certainly all zero and raises
        LookupError when a generated tail shows no 2 within the search window.
        """
        for n in range(m + 1, len(self.prefix) + 1):
            if self.prefix[n - 1] == 2:
                return n
        start = max(m + 1, len(self.prefix) + 1)
        if self.tail == "periodic":
            if 2 not in self.pattern:
                return None
            for n in range(start, start + len(self.pattern)):
                if self.digit(n) == 2:
                    return n
        for n in range(start, start + _GENERATOR_SEARCH):
            if self.digit(n) == 2:
                return n
        raise LookupError("no digit 2 found within the generator search window")

    def tail_equal(self, other: "DigitSequence", m: int):
        """Whether digits agree at every position > m (None if undecidable)."""
        if self.tail == "generator" or other.tail == "generator":
            return None
        # past both prefixes the digits repeat with the lcm of the periods
        end = max(m, len(self.prefix), len(other.prefix)) + math.lcm(len(self.pattern), len(other.pattern))
        return all(self.digit(n) == other.digit(n) for n in range(m + 1, end + 1))

    def with_digit(self, n: int, d: int) -> "DigitSequence":
        """Copy with digit ``n`` replaced (prefix extended as needed)."""
        if self.tail == "generator":
            raise ValueError("cannot edit a generated digit sequence")
        prefix = list(self.digits(max(n, len(self.prefix))))
        prefix[n - 1] = d
        # re-anchor the periodic tail so positions past the prefix are unchanged
        shift = (len(prefix) - len(self.prefix)) % len(self.pattern)
        pattern = self.pattern[shift:] + self.pattern[:shift]
        return DigitSequence(tuple(prefix), "periodic", pattern)

    def to_json(self) -> dict:
        if self.tail == "generator":
            raise ValueError(f"generated digit rule {self.name!r} is not serializable")
        return {"prefix": [str(d) for d in self.prefix], "tail": "periodic", "pattern": [str(d) for d in self.pattern]}

    @classmethod
    def from_json(cls, data: dict) -> "DigitSequence":
        if data.get("tail", "periodic") != "periodic":
            raise ValueError("only periodic digit tails are serializable")
        return cls(tuple(int(d) for d in data["prefix"]), "periodic", tuple(int(d) for d in data["pattern"]))


# ---------------------------------------------------------------------------
# spiffy numbers
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SpiffyNumber:
    schedule: ExponentSchedule
    digits: DigitSequence

    @classmethod
    def paper(cls, digits: DigitSequence | None = None) -> "SpiffyNumber":
        return cls(ExponentSchedule.paper_tower(), digits or DigitSequence.all2())

    def is_spiffy(self):
        return self.digits.is_spiffy()

    def to_json(self) -> dict:
        return {"schedule": self.schedule.to_json(), "digits": self.digits.to_json()}

    @classmethod
    def from_json(cls, data: dict) -> "SpiffyNumber":
        return cls(ExponentSchedule.from_json(data["schedule"]), DigitSequence.from_json(data["digits"]))


def truncation_numerator(x: SpiffyNumber, m: int) -> tuple:
    """Unreduced ``(p_m, e_m)`` with ``r_m = p_m / 3**e_m``."""
    if m < 0:
        raise DomainError("truncation level must be non-negative")
    if m == 0:
        return mpz(0), 0
    exps = [x.schedule.exponent(n) for n in range(1, m + 1)]
    if not all(isinstance(e, int) for e in exps) or not fits_cap(power_bits(3, exps[-1])):
        raise UnmaterializableError(f"q_{m} = 3^e_{m} exceeds the materialization cap")
    p = mpz(0)
    prev = 0
    three = mpz(3)
    for n, e in enumerate(exps, start=1):
        p = p * three ** (e - prev) + x.digits.digit(n)
        prev = e
    return p, exps[-1]


def truncate(x: SpiffyNumber, m: int) -> MPQ:
    """Exact truncation ``r_m = sum_{n<=m} a_n 3**-e_n``."""
    p, e = truncation_numerator(x, m)
    return mpq(p, mpz(3) ** e)


def _three_power_bound(e) -> Magnitude:
    """3 * 3**-e for an int or magnitude exponent."""
    if isinstance(e, int):
        return mag_from_power(3, 1 - e)
    return mag_from_power(3, mag_add_int(e, -1), sign=-1)


@dataclass(frozen=True)
class TailBound:
    generic: Magnitude
    refined: Magnitude
    refined_index: int | None

    def best(self) -> Magnitude:
        return self.refined


def tail_bound(x: SpiffyNumber, m: int) -> TailBound:
    """Bounds on ``x - r_m``: generic ``3 * 3**-e_{m+1}`` and digit-aware ``3 * 3**-e_{n'}``.

    ``n'`` is the first index past ``m`` carrying digit 2; an all-zero tail
    gives a refined bound of exactly zero.
    """
    generic = _three_power_bound(x.schedule.exponent(m + 1))
    try:
        n2 = x.digits.next_two(m)
    except LookupError:
        return TailBound(generic, generic, m + 1)
    if n2 is None:
        return TailBound(generic, ZERO, None)
    if n2 == m + 1:
        return TailBound(generic, generic, n2)
    return TailBound(generic, _three_power_bound(x.schedule.exponent(n2)), n2)


@dataclass(frozen=True)
class ExponentReport:
    level: int
    guaranteed: object  # mpq, or Magnitude when e_{m+1} is unmaterializable
    achieved: IntervalReal | None
    liouville_grade: bool


def liouville_exponent_lower(x: SpiffyNumber, m: int, budget: int = DEFAULT_BUDGET) -> ExponentReport:
    """Exponent ``(e_{m+1} - 1) / e_m`` guaranteed by the generic tail bound.

    When the next nonzero level is materializable the exponent actually
    achieved by ``r_m``, ``-log|x - r_m| / log q_m``, is enclosed as well.
    Schedules whose guaranteed exponent does not exceed 2 carry no
    Liouville information and are flagged.
    """
    e_m = x.schedule.exponent_int(m)
    e_next = x.schedule.exponent(m + 1)
    if isinstance(e_next, int):
        guaranteed = mpq(e_next - 1, e_m)
        grade = guaranteed > 2
    else:
        guaranteed = mag_mul(mag_add_int(e_next, -1, budget), Magnitude.of(mpq(1, e_m)), budget)
        grade = True
    achieved = None
    try:
        achieved = _achieved_exponent(x, m, e_m, budget)
    except UnmaterializableError:
        pass
    return ExponentReport(m, guaranteed, achieved, grade)


def _achieved_exponent(x: SpiffyNumber, m: int, e_m: int, budget: int):
    n2 = x.digits.next_two(m)
    if n2 is None:
        return None
    e2 = x.schedule.exponent(n2)
    if not isinstance(e2, int) or not fits_cap(power_bits(3, e2)):
        raise UnmaterializableError("next nonzero level is not materializable")
    d_lo = mpq(2, mpz(3) ** e2)
    rest = tail_bound(x, n2).refined
    if rest.level == 0:
        d_hi = d_lo + rest.value
    else:
        slack = d_lo * mpq(1, 1 << budget)
        if mag_compare(rest, Magnitude.of(slack), budget) > 0:
            raise UnmaterializableError("tail after the next nonzero level is not negligible")
        d_hi = d_lo + slack
    log_q = interval_log(IntervalReal.exact(3, budget)) * e_m
    dist = IntervalReal(d_lo, d_hi, budget)
    return -interval_log(dist) / log_q


@dataclass(frozen=True)
class EpsilonStrongReport:
    level: int
    epsilon: MPQ
    passed: bool
    achieved: object  # (e_{n'} - 1) / e_m as mpq or Magnitude; None for a zero tail
    required: IntervalReal  # (log q_m)^(1+eps)
    in_definition: bool
    margin: IntervalReal | None
    liouville_grade: bool


def epsilon_strong_check(x: SpiffyNumber, eps, m: int, budget: int = DEFAULT_BUDGET) -> EpsilonStrongReport:
    """Is the digit-aware tail at level ``m`` below ``q_m ** -(log q_m)**(1+eps)``?

    Decided in exponent space through :func:`mag_leq_power`.  ``eps = 0`` is
    evaluated but reported as outside the definition (which needs eps > 0).
    """
    eps = rat(eps)
    if eps < 0:
        raise DomainError("epsilon must be non-negative")
    e_m = x.schedule.exponent_int(m)
    log_q = interval_log(IntervalReal.exact(3, budget)) * e_m
    required = interval_exp(interval_log(log_q) * (1 + eps))
    tb = tail_bound(x, m)
    q_m = mag_from_power(3, e_m)
    passed = mag_leq_power(tb.refined, q_m, required, budget)
    achieved = None
    margin = None
    if tb.refined_index is not None:
        e2 = x.schedule.exponent(tb.refined_index)
        if isinstance(e2, int):
            achieved = mpq(e2 - 1, e_m)
            margin = IntervalReal.exact(achieved, budget) - required
        else:
            achieved = mag_mul(mag_add_int(e2, -1, budget), Magnitude.of(mpq(1, e_m)), budget)
    grade = liouville_exponent_lower(x, m, budget).liouville_grade
    return EpsilonStrongReport(m, eps, passed, achieved, required, eps > 0, margin, grade)


def prop11_threshold(N: int, eps) -> int:
    """Smallest integer strictly greater than ``3 * N**(1/(1+eps)) + 2``.

    ``eps`` is a positive rational or ``math.inf`` (limit N**0 = 1).
    """
    if N < 1:
        raise DomainError("N must be a positive integer")
    if isinstance(eps, float) and math.isinf(eps):
        return 3 + 2 + 1
    eps = rat(eps)
    if eps <= 0:
        raise DomainError("epsilon must be positive")
    # N^(1/(1+eps)) = N^(b/(a+b)) for eps = a/b
    a, b = int(eps.numerator), int(eps.denominator)
    root, _ = gmpy2.iroot(mpz(3) ** (a + b) * mpz(N) ** b, a + b)
    return int(root) + 2 + 1


def evaluate_enclosure(x: SpiffyNumber, m: int, budget: int = DEFAULT_BUDGET) -> IntervalReal:
    """``[r_m, r_m + tail]`` enclosing the value of ``x``."""
    r = truncate(x, m)
    tail = tail_bound(x, m).refined
    if tail.level == 0:
        return IntervalReal(r, r + tail.value, budget)
    bits = budget + 2 * r.denominator.bit_length()
    return IntervalReal(r, r + upper_rational(tail, bits), budget)


def ternary_digits(x: SpiffyNumber, m: int) -> str:
    """Base-3 expansion of ``r_m`` after the point, padded to ``e_m`` places."""
    p, e = truncation_numerator(x, m)
    s = gmpy2.digits(p, 3) if p else ""
    return s.rjust(e, "0")


__all__ = [
    "DigitSequence",
    "EpsilonStrongReport",
    "ExponentReport",
    "ExponentSchedule",
    "SpiffyNumber",
    "TailBound",
    "epsilon_strong_check",
    "evaluate_enclosure",
    "liouville_exponent_lower",
    "prop11_threshold",
    "schedule_exponent",
    "tail_bound",
    "ternary_digits",
    "truncate",
    "truncation_numerator",
]
