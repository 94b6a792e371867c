"""Continued fractions, Jarnik-type targets, Dirichlet approximation and
exact Taylor approximants of ``exp``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable

import gmpy2
from gmpy2 import mpq, mpz

from .errors import AmbiguousEnclosureError, DomainError
from .interval import DEFAULT_BUDGET, MPQ, IntervalReal, floor_q, interval_exp, interval_log, rat, rat_str
from .magnitude import Magnitude

# ---------------------------------------------------------------------------
# continued fractions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ContinuedFractionExpansion:
    """``[a_0; a_1, a_2, ...]`` with its convergent table.

    ``convergents[k]`` is ``(p_k, q_k)`` for the prefix ``[a_0; a_1..a_k]``.
    """

    integer_part: int
    quotients: tuple = ()

    def __post_init__(self):
        if any(a < 1 for a in self.quotients):
            raise DomainError("partial quotients must be positive")

    @cached_property
    def convergents(self) -> tuple:
        p0, q0 = mpz(1), mpz(0)
        p1, q1 = mpz(self.integer_part), mpz(1)
        out = [(p1, q1)]
        for a in self.quotients:
            p0, q0, p1, q1 = p1, q1, a * p1 + p0, a * q1 + q0
            out.append((p1, q1))
        return tuple(out)

    def convergent(self, k: int) -> MPQ:
        p, q = self.convergents[k]
        return mpq(p, q)

    def value(self) -> MPQ:
        """Exact value of the finite expansion."""
        return self.convergent(len(self.quotients))

    def __len__(self):
        return len(self.quotients) + 1

    def __str__(self):
        return f"[{self.integer_part}; {', '.join(map(str, self.quotients))}]"

    def to_json(self) -> dict:
        return {"integer_part": str(self.integer_part), "quotients": [str(a) for a in self.quotients]}

    @classmethod
    def from_json(cls, data: dict) -> "ContinuedFractionExpansion":
        return cls(int(data["integer_part"]), tuple(int(a) for a in data["quotients"]))


def cf_convergents(quotients, integer_part: int = 0) -> ContinuedFractionExpansion:
    """Convergent table of ``[integer_part; quotients...]``."""
    return ContinuedFractionExpansion(int(integer_part), tuple(int(a) for a in quotients))


def cf_of_rational(x) -> ContinuedFractionExpansion:
    x = rat(x)
    a0 = floor_q(x)
    qs = []
    p, q = x.numerator - a0 * x.denominator, x.denominator
    while p:
        p, q = q, p
        a = p // q
        qs.append(int(a))
        p -= a * q
    return ContinuedFractionExpansion(a0, tuple(qs))


def cf_of_real(x: IntervalReal, depth: int) -> ContinuedFractionExpansion:
    """First ``depth`` partial quotients (integer part included) shared by every point of ``x``.

    An exact rational with a shorter expansion returns that expansion.
    Raises AmbiguousEnclosureError when the enclosure straddles a quotient
    boundary.
    """
    if depth < 1:
        raise DomainError("depth must be at least 1")
    lo, hi = x.lower, x.upper
    digits = []
    while len(digits) < depth:
        a = floor_q(lo)
        if floor_q(hi) != a:
            raise AmbiguousEnclosureError(f"enclosure straddles {a + 1} at quotient {len(digits)}")
        digits.append(a)
        lo, hi = lo - a, hi - a
        if hi == 0:
            break
        if lo == 0:
            raise AmbiguousEnclosureError(f"enclosure touches a rational endpoint at quotient {len(digits)}")
        lo, hi = 1 / hi, 1 / lo
    return ContinuedFractionExpansion(digits[0], tuple(digits[1:]))


def dirichlet_approx(alpha: IntervalReal, Q: int) -> tuple:
    """``(r, s)`` with ``1 <= s <= Q`` and certified ``|alpha - r/s| <= 1/(s*Q)``.

    Uses the last continued-fraction convergent of ``alpha`` with
    denominator at most ``Q``.
    """
    if Q < 1:
        raise DomainError("Q must be positive")
    lo, hi = alpha.lower, alpha.upper
    p0, q0, p1, q1 = mpz(1), mpz(0), mpz(floor_q(lo)), mpz(1)
    if floor_q(hi) != p1:
        raise AmbiguousEnclosureError("enclosure straddles an integer")
    best = (p1, q1)
    flo, fhi = lo - p1, hi - p1
    while fhi != 0 and flo != 0:
        flo, fhi = 1 / fhi, 1 / flo
        a = floor_q(flo)
        if floor_q(fhi) != a:
            break
        p0, q0, p1, q1 = p1, q1, a * p1 + p0, a * q1 + q0
        if q1 > Q:
            break
        best = (p1, q1)
        flo, fhi = flo - a, fhi - a
    r, s = best
    err = abs(alpha - IntervalReal.exact(mpq(r, s), alpha.budget))
    if err.upper > mpq(1, s * Q):
        raise AmbiguousEnclosureError("enclosure too wide to certify |alpha - r/s| <= 1/(sQ)")
    return int(r), int(s)


# ---------------------------------------------------------------------------
# forced-quotient schedules
# ---------------------------------------------------------------------------


def _ceil_exp_cube(n: int) -> int:
    budget = DEFAULT_BUDGET + 2 * n**3
    while True:
        enc = interval_exp(IntervalReal.exact(n**3, budget))
        lo, hi = floor_q(enc.lower), floor_q(enc.upper)
        if lo == hi:
            return int(lo) + 1  # e^k is irrational for k >= 1
        budget *= 2


_FORCED_FORMS = {
    "2^(2^n)": lambda n: 1 << (1 << n),
    "2^n": lambda n: 1 << n,
    "ceil(e^(n^3))": _ceil_exp_cube,
}


def forced_schedule(spec: str) -> Callable[[int], int]:
    """Parse a forced-quotient form.

    Accepted forms: ``2^(2^n)``, ``2^n``, ``ceil(e^(n^3))``, ``n^K``,
    ``const:K`` and ``list:a,b,c``.
    """
    s = spec.replace(" ", "")
    if s in _FORCED_FORMS:
        return _FORCED_FORMS[s]
    m = re.fullmatch(r"n\^(\d+)", s)
    if m:
        k = int(m.group(1))
        return lambda n: n**k
    m = re.fullmatch(r"const:(\d+)", s)
    if m:
        c = int(m.group(1))
        return lambda n: c
    m = re.fullmatch(r"list:(\d+(?:,\d+)*)", s)
    if m:
        vals = [int(v) for v in m.group(1).split(",")]

        def from_list(n):
            if n > len(vals):
                raise DomainError(f"forced list has only {len(vals)} entries")
            return vals[n - 1]

        return from_list
    raise ValueError(f"unknown forced-quotient form {spec!r}")


# ---------------------------------------------------------------------------
# Jarnik-type targets
# ---------------------------------------------------------------------------

# u = [-1; 1, filler, g(1), filler, g(2), ...] lies in (-1/3, -1/4), inside
# the domain (-1/e, 0) where x log x = u has two branch preimages.
JARNIK_INTEGER_PART = -1
JARNIK_PREFIX = (1,)


@dataclass(frozen=True)
class JarnikStage:
    n: int
    index: int  # position k of the forced quotient a_k
    forced_quotient: int
    A: int  # approximant A/B is the convergent k-1
    B: int
    q_next: int  # denominator of convergent k
    error_lower: MPQ  # 1/(B (q_next + B)) < |u - A/B|
    error_upper: MPQ  # |u - A/B| < 1/(B q_next)
    log_denominator: IntervalReal
    achieved_exponent: IntervalReal  # -log(error_upper) / log B

    @property
    def approximant(self) -> MPQ:
        return mpq(self.A, self.B)

    @property
    def error_bound(self) -> Magnitude:
        return Magnitude.of(self.error_upper)


def _stage_record(n, k, cf: ContinuedFractionExpansion, budget) -> JarnikStage:
    A, B = cf.convergents[k - 1]
    _, q_next = cf.convergents[k]
    lo = mpq(1, B * (q_next + B))
    hi = mpq(1, B * q_next)
    log_b = interval_log(IntervalReal.exact(B, budget))
    achieved = -interval_log(IntervalReal.exact(hi, budget)) / log_b
    return JarnikStage(n, k, int(cf.quotients[k - 1]), int(A), int(B), int(q_next), lo, hi, log_b, achieved)


@dataclass(frozen=True)
class JarnikTarget:
    """Continued fraction with one forced quotient per stage and filler elsewhere.

    ``cf`` holds the explicit quotients; past its end every quotient equals
    ``filler``.  The tail never ends, so ``u`` is irrational and every
    stage error is strictly inside its sandwich.
    """

    cf: ContinuedFractionExpansion
    filler: int
    forced: str
    stages: tuple = ()
    budget: int = DEFAULT_BUDGET

    def quotient(self, k: int) -> int:
        if k <= len(self.cf.quotients):
            return self.cf.quotients[k - 1]
        return self.filler

    def extended(self, extra: int) -> ContinuedFractionExpansion:
        return ContinuedFractionExpansion(self.cf.integer_part, self.cf.quotients + (self.filler,) * extra)

    def enclosure(self, extra: int = 8) -> IntervalReal:
        """Interval between two consecutive convergents past the explicit part."""
        ext = self.extended(extra)
        a, b = ext.convergent(len(ext.quotients) - 1), ext.convergent(len(ext.quotients))
        return IntervalReal(min(a, b), max(a, b), self.budget)

    def to_json(self) -> dict:
        return {
            "cf": self.cf.to_json(),
            "filler": self.filler,
            "forced": self.forced,
            "stages": [
                {
                    "n": s.n,
                    "index": s.index,
                    "forced_quotient": str(s.forced_quotient),
                    "A": str(s.A),
                    "B": str(s.B),
                    "error_upper": rat_str(s.error_upper),
                    "achieved_exponent": s.achieved_exponent.to_json(),
                }
                for s in self.stages
            ],
        }

    @classmethod
    def from_json(cls, data: dict, budget: int = DEFAULT_BUDGET) -> "JarnikTarget":
        """Rebuild from the quotient list; stored stage data is recomputed, not trusted."""
        cf = ContinuedFractionExpansion.from_json(data["cf"])
        filler = int(data["filler"])
        idx = [(int(s["n"]), int(s["index"])) for s in data.get("stages", [])]
        stages = tuple(_stage_record(n, k, cf, budget) for n, k in idx)
        return cls(cf, filler, str(data.get("forced", "")), stages, budget)


def jarnik_generate(g, filler: int = 2, stages: int = 4, budget: int = DEFAULT_BUDGET) -> JarnikTarget:
    """Build ``u = [-1; 1, filler, g(1), filler, g(2), ..., filler, g(stages), filler, ...]``.

    ``g`` is a callable or a forced-quotient form accepted by
    :func:`forced_schedule`.  Each stage records the convergent just before
    its forced quotient together with the exact error sandwich.
    """
    if filler < 1:
        raise DomainError("filler quotient must be at least 1")
    if stages < 0:
        raise DomainError("stages must be non-negative")
    name = g if isinstance(g, str) else getattr(g, "__name__", "custom")
    fn = forced_schedule(g) if isinstance(g, str) else g
    qs = list(JARNIK_PREFIX)
    positions = []
    prev = 0
    for n in range(1, stages + 1):
        gn = int(fn(n))
        if gn < 1 or gn < prev:
            raise DomainError("forced quotients must be positive and nondecreasing")
        prev = gn
        qs.append(filler)
        qs.append(gn)
        positions.append((n, len(qs)))
    qs.append(filler)
    cf = ContinuedFractionExpansion(JARNIK_INTEGER_PART, tuple(qs))
    recs = tuple(_stage_record(n, k, cf, budget) for n, k in positions)
    return JarnikTarget(cf, filler, name, recs, budget)


# ---------------------------------------------------------------------------
# lcm and Taylor approximants
# ---------------------------------------------------------------------------


def lcm_upto(L: int, budget: int = DEFAULT_BUDGET) -> tuple:
    """``(lcm(1..L), enclosure of log lcm(1..L))``."""
    if L < 1:
        raise DomainError("L must be positive")
    value = mpz(1)
    p = mpz(2)
    while p <= L:
        pk = p
        while pk * p <= L:
            pk *= p
        value *= pk
        p = gmpy2.next_prime(p)
    return int(value), interval_log(IntervalReal.exact(value, budget))


@dataclass(frozen=True)
class ExpApproximant:
    U: MPQ
    L: int
    value: MPQ
    remainder_bound: Magnitude
    certificate: dict = field(compare=False)
    log_Q: IntervalReal = field(compare=False)
    c2_measured: IntervalReal | None = field(compare=False)

    @property
    def P(self) -> int:
        return int(self.value.numerator)

    @property
    def Q(self) -> int:
        return int(self.value.denominator)


def taylor_sum(U, L: int) -> MPQ:
    """Exact ``sum_{k=0}^{L} U**k / k!``."""
    U = rat(U)
    u, b = mpz(U.numerator), mpz(U.denominator)
    num = mpz(0)
    uk = mpz(1)
    fL = gmpy2.fac(L)
    for k in range(L + 1):
        num += uk * b ** (L - k) * (fL // gmpy2.fac(k))
        uk *= u
    return mpq(num, b**L * fL)


def exp_taylor_rational(U, L: int, allow_outside: bool = False, budget: int = DEFAULT_BUDGET) -> ExpApproximant:
    """Degree-``L`` Taylor polynomial of ``exp`` at the rational ``U``.

    The certificate records both denominator divisibility forms:
    ``Q | B^L * L!`` (always true) and ``Q | B^L * lcm(1..L)``.
    """
    U = rat(U)
    if L < 1:
        raise DomainError("degree L must be positive")
    if not allow_outside and not (-1 <= U <= 0):
        raise DomainError("U must lie in [-1, 0]")
    val = taylor_sum(U, L)
    B = mpz(U.denominator)
    Q = mpz(val.denominator)
    lcm, _ = lcm_upto(L, budget)
    fac_form = B**L * gmpy2.fac(L)
    lcm_form = B**L * lcm
    cert = {
        "B": str(B),
        "L": L,
        "factorial_form": bool(fac_form % Q == 0),
        "lcm_form": bool(lcm_form % Q == 0),
    }
    rem = Magnitude.of(abs(U) ** (L + 1) / gmpy2.fac(L + 1))
    log_q = interval_log(IntervalReal.exact(Q, budget))
    c2 = None
    if L >= 2:
        log_b = interval_log(IntervalReal.exact(B, budget))
        log_l = interval_log(IntervalReal.exact(L, budget))
        c2 = (log_q - log_b * L) / (log_l * L)
    return ExpApproximant(U, L, val, rem, cert, log_q, c2)


__all__ = [
    "ContinuedFractionExpansion",
    "ExpApproximant",
    "JarnikStage",
    "JarnikTarget",
    "cf_convergents",
    "cf_of_rational",
    "cf_of_real",
    "dirichlet_approx",
    "exp_taylor_rational",
    "forced_schedule",
    "jarnik_generate",
    "lcm_upto",
    "taylor_sum",
]
