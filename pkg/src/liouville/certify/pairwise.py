"""Pairwise powers ``x**y`` for spiffy numbers sharing anchor truncations.

At stage ``k`` both inputs agree up to level ``m_k`` with anchor
``a = p/q``.  With ``L_k = r/s`` a Dirichlet approximation of ``log a``
(``s <= Q_k = ceil(e**sqrt(e_{m_k}))``), ``U~ = a L_k`` has denominator
dividing ``q s`` and ``P/Q = T_L(U~)`` with ``L = floor(e_{m_k}**(1/3))``.
Since ``exp`` is 1-Lipschitz on non-positive reals,

    |x**y - P/Q| <= |y log x - a log a| + a |log a - L_k| + |U~|**(L+1)/(L+1)!

and for ``x >= a`` the first term is at most ``tail_y |log a| + tail_x``
(or ``M_phi tail_x`` when ``x = y``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import gmpy2
from gmpy2 import mpq, mpz

from ..diophantine import dirichlet_approx, exp_taylor_rational
from ..errors import AnchorMismatchError, DomainError, MalformedCertificateError, MixedScheduleError, UnmaterializableError
from ..interval import DEFAULT_BUDGET, GUARD_BITS, IntervalReal, ceil_q, e_inv, interval_exp, interval_log, rat_str
from ..magnitude import ZERO, Magnitude, mag_mul, mag_sum
from ..schedule import DigitSequence, ExponentSchedule, SpiffyNumber, tail_bound, truncate
from ..selfpower import phi_lipschitz
from .common import (
    check_constants,
    SCHEMA_VERSION,
    Reader,
    Verdict,
    achieved_exponent,
    diff_claims,
    enc_json,
    max_exponent_json,
    normalize,
)

GAP_RULES = ("exp", "square", "increasing")


def gap_rule_holds(rule: str, e_prev: int, e_next: int, budget: int = DEFAULT_BUDGET) -> bool:
    if rule == "increasing":
        return e_next > e_prev
    if rule == "square":
        return e_next >= e_prev * e_prev
    if rule == "exp":
        return interval_exp(IntervalReal.exact(e_prev, budget)).upper <= e_next
    raise ValueError(f"unknown gap rule {rule!r}")


def satisfied_rules(exps, budget: int = DEFAULT_BUDGET) -> list:
    return [r for r in GAP_RULES if all(gap_rule_holds(r, a, b, budget) for a, b in zip(exps, exps[1:]))]


def dirichlet_bound(e_m: int, cap_bits: int) -> int:
    """``ceil(e**sqrt(e_m))`` capped at ``2**cap_bits``."""
    root = IntervalReal.exact(e_m).sqrt()
    if root.upper > cap_bits * mpq(7, 10):  # e**t exceeds 2**cap once t > cap ln 2
        return 1 << cap_bits
    return min(int(ceil_q(interval_exp(root).upper)), 1 << cap_bits)


def derive_stage(x: SpiffyNumber, y: SpiffyNumber, levels, k: int, gap_rule: str, budget: int) -> dict:
    if x.schedule != y.schedule:
        raise MixedScheduleError("x and y must share one exponent schedule")
    if not 1 <= k <= len(levels):
        raise DomainError(f"stage {k} outside the {len(levels)} synchronized levels")
    if gap_rule not in GAP_RULES:
        raise DomainError(f"unknown gap rule {gap_rule!r}")
    if any(b <= a for a, b in zip(levels, levels[1:])) or levels[0] < 1:
        raise DomainError("synchronized levels must be positive and increasing")
    exps = [x.schedule.exponent_int(lv) for lv in levels[:k]]
    if not gap_rule_holds_all(gap_rule, exps, budget):
        raise DomainError(f"levels do not satisfy the {gap_rule!r} gap rule")
    m = levels[k - 1]
    a = truncate(x, m)
    if truncate(y, m) != a:
        raise AnchorMismatchError(f"x and y have different truncations at level {m}")
    e_m = exps[-1]
    c = e_inv(budget)
    if not (0 < a < c.lower):
        raise DomainError("anchor must lie in (0, 1/e)")
    Qd = dirichlet_bound(e_m, budget // 2)
    work = budget + 2 * Qd.bit_length() + GUARD_BITS
    log_a = interval_log(IntervalReal.exact(a, work))
    r, s = dirichlet_approx(log_a, Qd)
    if r > 0:
        raise DomainError("log approximation must be non-positive")
    U = a * mpq(r, s)
    d = mpz(a.denominator) * s
    L = int(gmpy2.iroot(mpz(e_m), 3)[0])
    approx = exp_taylor_rational(U, L, budget=budget)
    tx, ty = tail_bound(x, m).refined, tail_bound(y, m).refined
    same = x.digits == y.digits
    if same:
        m_phi = phi_lipschitz(a, work)
        first = ZERO if tx.is_zero() else mag_mul(Magnitude.of(m_phi.upper), tx, budget)
    else:
        first = mag_sum([ZERO if ty.is_zero() else mag_mul(Magnitude.of((-log_a).upper), ty, budget), tx], budget)
    terms = {
        "anchor_gap": first,
        "log_approx": Magnitude.of(a * mpq(1, s * Qd)),
        "taylor_remainder": approx.remainder_bound,
    }
    total = mag_sum(terms.values(), budget)
    return {
        "m": str(m),
        "anchor": rat_str(a),
        "dirichlet_Q": str(Qd),
        "log_approx": {"r": str(r), "s": str(s)},
        "U_tilde": rat_str(U),
        "d": str(d),
        "d_divisible": (d % U.denominator == 0),
        "L": str(L),
        "P": str(approx.P),
        "Q": str(approx.Q),
        "error_terms": {n: t.to_json() for n, t in terms.items()},
        "total_error": total.to_json(),
        "achieved_exponent": enc_json(achieved_exponent(total, approx.Q, budget)),
        "gap_rules_satisfied": satisfied_rules(exps, budget),
    }


def gap_rule_holds_all(rule: str, exps, budget: int) -> bool:
    return all(gap_rule_holds(rule, a, b, budget) for a, b in zip(exps, exps[1:]))


@dataclass(frozen=True)
class PairwiseStage:
    k: int
    claims: dict

    @property
    def anchor(self):
        from ..interval import parse_rat

        return parse_rat(self.claims["anchor"])

    @property
    def error_terms(self) -> dict:
        return {n: Magnitude.from_json(v) for n, v in self.claims["error_terms"].items()}

    @property
    def total_error(self) -> Magnitude:
        return Magnitude.from_json(self.claims["total_error"])

    @property
    def Q(self) -> int:
        return int(self.claims["Q"])

    @property
    def achieved_exponent(self):
        e = self.claims["achieved_exponent"]
        return None if e is None else IntervalReal.from_json(e)

    def to_json(self) -> dict:
        return {"k": str(self.k), **self.claims}


def pairwise_power_certificate(x: SpiffyNumber, y: SpiffyNumber, levels, k: int, gap_rule: str = "increasing", budget: int = DEFAULT_BUDGET) -> PairwiseStage:
    """Stage ``k`` of the certificate for ``x**y`` over synchronized ``levels``."""
    return PairwiseStage(k, normalize(derive_stage(x, y, tuple(levels), k, gap_rule, budget)))


@dataclass(frozen=True)
class PairwiseCertificate:
    x: SpiffyNumber
    y: SpiffyNumber
    levels: tuple
    gap_rule: str
    stages: tuple
    budget: int

    def to_json(self) -> dict:
        exps = [s.achieved_exponent for s in self.stages]
        return {
            "schema_version": SCHEMA_VERSION,
            "type": "pairwise",
            "schedule": self.x.schedule.to_json(),
            "digits": {"x": self.x.digits.to_json(), "y": self.y.digits.to_json()},
            "levels": [str(v) for v in self.levels],
            "gap_rule": self.gap_rule,
            "budget": str(self.budget),
            "constants": {"exp_lipschitz": "1", "dirichlet_cap_bits": str(self.budget // 2)},
            "stages": [s.to_json() for s in self.stages],
            "verdict": normalize({"stage_count": str(len(self.stages)), "max_achieved_exponent": max_exponent_json(exps)}),
        }


def build_pairwise_certificate(x, y, levels, stages=None, gap_rule: str = "increasing", budget: int = DEFAULT_BUDGET) -> PairwiseCertificate:
    levels = tuple(levels)
    ks = range(1, len(levels) + 1) if stages is None else stages
    built = tuple(pairwise_power_certificate(x, y, levels, k, gap_rule, budget) for k in ks)
    return PairwiseCertificate(x, y, levels, gap_rule, built, budget)


def verify_pairwise(doc: dict, budget: int | None = None) -> Verdict:
    r = Reader(doc)
    budget = r.int("budget") if budget is None else budget
    try:
        schedule = ExponentSchedule.from_json(r.raw("schedule"))
        dg = r.obj("digits")
        x = SpiffyNumber(schedule, DigitSequence.from_json(dg.raw("x")))
        y = SpiffyNumber(schedule, DigitSequence.from_json(dg.raw("y")))
    except (KeyError, TypeError) as exc:
        raise MalformedCertificateError(f"bad inputs: {exc}") from None
    except ValueError as exc:
        return Verdict(False, "rejected", [("input", "inputs", str(exc))])
    levels = tuple(r.int_list("levels"))
    rule = r.str("gap_rule")
    failures, table = [], []
    check_constants(r, {"exp_lipschitz": "1", "dirichlet_cap_bits": str(budget // 2)}, failures)
    exps = []
    for i, raw in enumerate(r.list("stages")):
        sr = Reader(raw, f"$.stages[{i}]")
        k = sr.int("k")
        label = str(k)
        try:
            derived = normalize(derive_stage(x, y, levels, k, rule, budget))
        except (DomainError, AnchorMismatchError, MixedScheduleError, UnmaterializableError) as exc:
            failures.append((label, "domain", str(exc)))
            continue
        stored = {kk: v for kk, v in raw.items() if kk != "k"}
        for path in diff_claims(stored, derived):
            failures.append((label, path, "stored value differs from recomputation"))
        e = derived["achieved_exponent"]
        exp = None if e is None else IntervalReal.from_json(e)
        exps.append(exp)
        table.append((label, exp))
    verdict = normalize({"stage_count": str(len(r.list("stages"))), "max_achieved_exponent": max_exponent_json(exps)})
    if not failures and r.raw("verdict") != verdict:
        failures.append(("verdict", "verdict", "summary differs from recomputation"))
    if failures:
        return Verdict(False, "rejected", failures, table)
    return Verdict(True, "accepted" if table else "vacuous", [], table)
