"""Tuned-spiffy stage data and the self-power error chain built on it.

Stage ``j`` at level ``m_j`` couples the truncation ``r = r_{m_j}`` with
rationals ``U/V`` and ``A/B``:

* ``V >= floor(e**(j**3))`` and ``|phi(r) - U/V| <= V**-(j**2)``
* ``|e**(U/V) - A/B| <= B**-(j**2)``
* ``log B <= j log V``, checked exactly as ``B <= V**j``

Every check is reported as pass, fail or undecidable; the builder never
claims a condition it cannot certify.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from gmpy2 import mpq, mpz

from ..errors import DomainError, MalformedCertificateError, UnmaterializableError
from ..interval import DEFAULT_BUDGET, GUARD_BITS, IntervalReal, floor_q, interval_exp, interval_log, rat, rat_str
from ..magnitude import ZERO, Magnitude, mag_mul, mag_sum
from ..schedule import DigitSequence, SpiffyNumber, tail_bound, truncate, truncation_numerator
from ..selfpower import phi, phi_lipschitz
from .common import (
    check_constants,
    FAIL,
    PASS,
    SCHEMA_VERSION,
    UNDECIDABLE,
    Reader,
    Verdict,
    achieved_exponent,
    diff_claims,
    enc_json,
    max_exponent_json,
    normalize,
    status_le,
)

_MAX_EXHAUSTIVE_BLOCK = 16


def build_tuned_parameters(j: int, budget: int = DEFAULT_BUDGET) -> tuple:
    """``(V_j, B_j) = (floor(e**(j**3)), V_j**j)``."""
    if j < 1:
        raise DomainError("j must be positive")
    return tuned_floor(j, budget), tuned_floor(j, budget) ** j


def tuned_floor(j: int, budget: int = DEFAULT_BUDGET) -> int:
    """Certified ``floor(e**(j**3))`` (never ambiguous: ``e**k`` is irrational)."""
    b = budget + 2 * j**3
    while True:
        enc = interval_exp(IntervalReal.exact(j**3, b))
        lo, hi = floor_q(enc.lower), floor_q(enc.upper)
        if lo == hi:
            return int(lo)
        b *= 2


def _order(gap: IntervalReal, base: int, budget: int):
    """Certified lower bound on ``-log(gap) / log(base)``."""
    if base <= 1 or gap.upper <= 0:
        return None
    return -interval_log(IntervalReal.exact(gap.upper, budget)) / interval_log(IntervalReal.exact(base, budget))


def derive_stage(x: SpiffyNumber, j: int, m: int, U, V: int, A, B: int, budget: int) -> dict:
    U, A = rat(U), rat(A)
    if V < 1 or B < 1:
        raise DomainError("V and B must be positive")
    if U > 0:
        raise DomainError("U must be non-positive (phi is negative on (0, 1))")
    if U.denominator != 1 or A.denominator != 1:
        raise DomainError("U and A must be integers")
    r = truncate(x, m)
    if r <= 0:
        raise DomainError("stage needs a nonzero truncation")
    work = budget + GUARD_BITS
    alpha = phi(IntervalReal.exact(r, work))
    v_floor = tuned_floor(j, budget)
    target = mpq(U, V)
    gap_ii = abs(alpha - target)
    bound_ii = mpq(1, mpz(V) ** (j * j))
    st_ii = status_le(gap_ii, bound_ii) if V >= v_floor else FAIL
    beta = interval_exp(IntervalReal.exact(target, work))
    gap_iii = abs(beta - mpq(A, B))
    st_iii = status_le(gap_iii, mpq(1, mpz(B) ** (j * j)))
    st_size = PASS if B <= mpz(V) ** j else FAIL
    # error chain for x**x against A/B
    tail = tail_bound(x, m).refined
    m_phi = phi_lipschitz(r, work)
    tail_term = ZERO if tail.is_zero() else mag_mul(Magnitude.of(m_phi.upper), tail, budget)
    terms = {
        "tail_through_phi": tail_term,
        "target_gap": Magnitude.of(gap_ii.upper),
        "exp_gap": Magnitude.of(gap_iii.upper),
    }
    total = mag_sum(terms.values(), budget)
    return {
        "V_floor": str(v_floor),
        "truncation": rat_str(r),
        "checks": {"cond_ii_gap": st_ii, "cond_iii_gap": st_iii, "size_coupling": st_size},
        "orders": {"cond_ii": enc_json(_order(gap_ii, V, budget)), "cond_iii": enc_json(_order(gap_iii, B, budget))},
        "constants": {"phi_lipschitz": rat_str(m_phi.upper)},
        "error_terms": {k: t.to_json() for k, t in terms.items()},
        "total_error": total.to_json(),
        "achieved_exponent": enc_json(achieved_exponent(total, B, budget)),
    }


@dataclass(frozen=True)
class TunedStage:
    j: int
    m: int
    U: int
    V: int
    A: int
    B: int
    claims: dict

    @property
    def checks(self) -> dict:
        return dict(self.claims["checks"])

    @property
    def error_terms(self) -> dict:
        return {k: Magnitude.from_json(v) for k, v in self.claims["error_terms"].items()}

    @property
    def total_error(self) -> Magnitude:
        return Magnitude.from_json(self.claims["total_error"])

    @property
    def achieved_exponent(self):
        e = self.claims["achieved_exponent"]
        return None if e is None else IntervalReal.from_json(e)

    def to_json(self) -> dict:
        raw = {"j": str(self.j), "m": str(self.m), "U": str(self.U), "V": str(self.V), "A": str(self.A), "B": str(self.B)}
        return {**raw, **self.claims}


def make_stage(x: SpiffyNumber, j: int, m: int, U: int, V: int, A: int, B: int, budget: int = DEFAULT_BUDGET) -> TunedStage:
    """Stage from explicit data (hand-built or tampered)."""
    return TunedStage(j, m, int(U), int(V), int(A), int(B), normalize(derive_stage(x, j, m, U, V, A, B, budget)))


def build_tuned_stage(x: SpiffyNumber, j: int, m: int, budget: int = DEFAULT_BUDGET) -> TunedStage:
    """Stage with ``V, B`` from :func:`build_tuned_parameters` and nearest numerators."""
    V, B = build_tuned_parameters(j, budget)
    r = truncate(x, m)
    alpha = phi(IntervalReal.exact(r, budget + GUARD_BITS))
    U = min(0, floor_q(alpha.mid * V + mpq(1, 2)))
    beta = interval_exp(IntervalReal.exact(mpq(U, V), budget + GUARD_BITS))
    A = floor_q(beta.mid * B + mpq(1, 2))
    return make_stage(x, j, m, U, V, A, B, budget)


def selfpower_error_chain(x: SpiffyNumber, stage: TunedStage, budget: int = DEFAULT_BUDGET) -> dict:
    """Named error terms for ``|x**x - A/B|`` and their certified sum."""
    claims = derive_stage(x, stage.j, stage.m, stage.U, stage.V, stage.A, stage.B, budget)
    terms = {k: Magnitude.from_json(v) for k, v in claims["error_terms"].items()}
    return {"terms": terms, "total": Magnitude.from_json(claims["total_error"])}


def verify_tuned_certificate(stages, x: SpiffyNumber, budget: int = DEFAULT_BUDGET) -> list:
    """Per-stage verdicts ``{cond_ii_gap, cond_iii_gap, size_coupling}`` recomputed from raw data."""
    out = []
    for st in stages:
        claims = derive_stage(x, st.j, st.m, st.U, st.V, st.A, st.B, budget)
        out.append({"j": st.j, **claims["checks"]})
    return out


# ---------------------------------------------------------------------------
# digit tuning
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TuneResult:
    block: tuple  # (first index, last index)
    digits: tuple
    gap: IntervalReal
    met: bool
    status: str  # "met" or "search-exhausted"
    searched: int


def tune_digits_search(x: SpiffyNumber, target, block: tuple, tolerance, budget: int = DEFAULT_BUDGET) -> TuneResult:
    """Choose the {0,2} digits at positions ``block[0]..block[1]`` minimizing ``|phi(r_m) - target|``.

    ``m = block[1]``; digits outside the block come from ``x``.  Blocks up
    to 16 positions are searched exhaustively, longer ones greedily from the
    most significant digit.  ``target`` may be a rational or an enclosure.
    An empty block (``block[1] < block[0]``) just measures the current gap.
    """
    lo, hi = block
    m = max(hi, lo - 1)
    if m < 1:
        raise DomainError("block must end at level >= 1")
    tgt = target if isinstance(target, IntervalReal) else IntervalReal.exact(target, budget)
    tol = tolerance.value if isinstance(tolerance, Magnitude) else rat(tolerance)
    work = budget + GUARD_BITS
    positions = list(range(lo, hi + 1))
    base_digits = list(x.digits.digits(m))
    for n in positions:
        base_digits[n - 1] = 0
    base = SpiffyNumber(x.schedule, DigitSequence(tuple(base_digits), "periodic", (0,)))
    p0, e_m = truncation_numerator(base, m)
    den = mpz(3) ** e_m
    steps = {n: 2 * mpz(3) ** (e_m - x.schedule.exponent_int(n)) for n in positions}
    k = work + 64

    def gap_of(choice):
        num = p0 + sum((steps[n] for n, d in zip(positions, choice) if d), mpz(0))
        if num == 0:
            return abs(IntervalReal.exact(0, work) - tgt)  # phi(0+) = 0
        # dyadic enclosure of num/den keeps deep truncations cheap
        lo = (num << k) // den
        r = IntervalReal(mpq(lo, 1 << k), mpq(lo + 1, 1 << k), work) if lo else IntervalReal.exact(mpq(num, den), work)
        return abs(phi(r) - tgt)

    searched = 0
    if len(positions) <= _MAX_EXHAUSTIVE_BLOCK:
        best, best_gap = None, None
        for choice in itertools.product((0, 1), repeat=len(positions)):
            g = gap_of(choice)
            searched += 1
            if best_gap is None or g.mid < best_gap.mid:
                best, best_gap = choice, g
    else:
        best = []
        for i in range(len(positions)):
            g0 = gap_of(tuple(best) + (0,) * (len(positions) - i))
            g1 = gap_of(tuple(best) + (1,) + (0,) * (len(positions) - i - 1))
            searched += 2
            best.append(1 if g1.mid < g0.mid else 0)
        best = tuple(best)
        best_gap = gap_of(best)
    digits = tuple(2 * d for d in best)
    met = best_gap.upper <= tol
    return TuneResult((lo, hi), digits, best_gap.with_budget(budget), met, "met" if met else "search-exhausted", searched)


# ---------------------------------------------------------------------------
# certificate document
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TunedCertificate:
    x: SpiffyNumber
    stages: tuple
    budget: int

    def to_json(self) -> dict:
        exps = [s.achieved_exponent for s in self.stages]
        return {
            "schema_version": SCHEMA_VERSION,
            "type": "tuned",
            "schedule": self.x.schedule.to_json(),
            "digits": self.x.digits.to_json(),
            "budget": str(self.budget),
            "constants": {"exp_lipschitz": "1"},
            "stages": [s.to_json() for s in self.stages],
            "verdict": _verdict(self.stages, exps),
        }


def _verdict(stages, exps) -> dict:
    passed = [str(s.j) for s in stages if all(v == PASS for v in s.checks.values())]
    return normalize(
        {"stage_count": str(len(stages)), "all_checks_pass": passed, "max_achieved_exponent": max_exponent_json(exps)}
    )


def build_tuned_certificate(x: SpiffyNumber, levels, budget: int = DEFAULT_BUDGET) -> TunedCertificate:
    """One stage per ``(j, m_j)`` in ``levels`` (or ``m_j`` list indexed from j=1)."""
    pairs = list(levels.items()) if isinstance(levels, dict) else list(enumerate(levels, start=1))
    return TunedCertificate(x, tuple(build_tuned_stage(x, j, m, budget) for j, m in pairs), budget)


def verify_tuned(doc: dict, budget: int | None = None) -> Verdict:
    r = Reader(doc)
    budget = r.int("budget") if budget is None else budget
    try:
        x = SpiffyNumber.from_json({"schedule": r.raw("schedule"), "digits": r.raw("digits")})
    except (KeyError, TypeError) as exc:
        raise MalformedCertificateError(f"bad schedule/digits: {exc}") from None
    except ValueError as exc:
        return Verdict(False, "rejected", [("input", "schedule/digits", str(exc))])
    failures, table, stages = [], [], []
    check_constants(r, {"exp_lipschitz": "1"}, failures)
    for i, raw in enumerate(r.list("stages")):
        sr = Reader(raw, f"$.stages[{i}]")
        j, m = sr.int("j"), sr.int("m")
        U, V, A, B = sr.int("U"), sr.int("V"), sr.int("A"), sr.int("B")
        label = str(j)
        try:
            derived = normalize(derive_stage(x, j, m, U, V, A, B, budget))
        except (DomainError, UnmaterializableError) as exc:
            failures.append((label, "domain", str(exc)))
            continue
        stored = {k: v for k, v in raw.items() if k not in ("j", "m", "U", "V", "A", "B")}
        for path in diff_claims(stored, derived):
            failures.append((label, path, "stored value differs from recomputation"))
        st = TunedStage(j, m, U, V, A, B, derived)
        stages.append(st)
        table.append((label, st.achieved_exponent))
    if not failures and r.raw("verdict") != _verdict(stages, [s.achieved_exponent for s in stages]):
        failures.append(("verdict", "verdict", "summary differs from recomputation"))
    if failures:
        return Verdict(False, "rejected", failures, table)
    return Verdict(True, "accepted" if stages else "vacuous", [], table)
