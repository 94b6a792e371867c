"""Self-power certificates from a Jarnik-type target ``u``.

For ``x`` with ``x log x = u`` the self-power is ``x**x = e**u``, so the
certificate only needs the continued-fraction data of ``u``.  At stage
``n`` the approximant ``A/B`` (the convergent before the forced quotient)
is pushed through the Taylor polynomial of ``exp``; ``exp`` is
1-Lipschitz on non-positive reals, hence

    |e**u - P/Q| <= |u - A/B| + |A/B|**(L+1) / (L+1)!
"""

from __future__ import annotations

from dataclasses import dataclass

from gmpy2 import mpq

from ..diophantine import JARNIK_PREFIX, ContinuedFractionExpansion, JarnikTarget, exp_taylor_rational, forced_schedule
from ..errors import DomainError, MalformedCertificateError
from ..interval import DEFAULT_BUDGET, IntervalReal, interval_exp, rat_str
from ..magnitude import Magnitude, mag_leq_power, mag_sum
from .common import (
    check_constants,
    FAIL,
    PASS,
    SCHEMA_VERSION,
    Reader,
    Verdict,
    achieved_exponent,
    bits_below,
    diff_claims,
    enc_json,
    max_exponent_json,
    normalize,
    status_le,
)

DEFAULT_L_RULE = "n^2"


def stage_index(n: int) -> int:
    """Position of the stage-``n`` forced quotient in the Jarnik layout."""
    return len(JARNIK_PREFIX) + 2 * n


def _u_enclosure(cf: ContinuedFractionExpansion, filler: int, width, budget: int) -> IntervalReal:
    extra = 4
    while True:
        ext = ContinuedFractionExpansion(cf.integer_part, cf.quotients + (filler,) * extra)
        k = len(ext.quotients)
        a, b = ext.convergent(k - 1), ext.convergent(k)
        if abs(a - b) <= width or extra > 1 << 16:
            return IntervalReal(min(a, b), max(a, b), budget)
        extra *= 2


def derive_stage(cf: ContinuedFractionExpansion, filler: int, n: int, L: int, budget: int) -> dict:
    """All claims of stage ``n``, recomputed from the quotient list."""
    k = stage_index(n)
    if k + 1 > len(cf.quotients):
        raise DomainError(f"stage {n} needs quotients up to index {k + 1}")
    A, B = cf.convergents[k - 1]
    _, q_next = cf.convergents[k]
    U = mpq(A, B)
    if not (-1 <= U <= 0):
        raise DomainError(f"stage {n} approximant {U} lies outside [-1, 0]")
    cf_gap = mpq(1, B * q_next)
    approx = exp_taylor_rational(U, L, budget=budget)
    terms = {"cf_gap": Magnitude.of(cf_gap), "taylor_remainder": approx.remainder_bound}
    total = mag_sum(terms.values(), budget)
    exponent = achieved_exponent(total, approx.Q, budget)
    # second route: exp over a tight enclosure of u itself
    work = max(budget, bits_below(total) + 64)
    u = _u_enclosure(cf, filler, total.value / 256, work)
    gap = abs(interval_exp(u) - approx.value)
    return {
        "index": str(k),
        "forced_quotient": str(cf.quotients[k - 1]),
        "A": str(A),
        "B": str(B),
        "q_next": str(q_next),
        "P": str(approx.P),
        "Q": str(approx.Q),
        "error_terms": {name: t.to_json() for name, t in terms.items()},
        "total_error": total.to_json(),
        "achieved_exponent": enc_json(exponent),
        "exp_check": status_le(gap, total.value),
        "denominator": {"factorial_form": approx.certificate["factorial_form"], "lcm_form": approx.certificate["lcm_form"]},
    }


@dataclass(frozen=True)
class SelfPowerStage:
    n: int
    L: int
    claims: dict

    @property
    def P(self) -> int:
        return int(self.claims["P"])

    @property
    def Q(self) -> int:
        return int(self.claims["Q"])

    @property
    def total_error(self) -> Magnitude:
        return Magnitude.from_json(self.claims["total_error"])

    @property
    def error_terms(self) -> dict:
        return {k: Magnitude.from_json(v) for k, v in self.claims["error_terms"].items()}

    @property
    def achieved_exponent(self):
        e = self.claims["achieved_exponent"]
        return None if e is None else IntervalReal.from_json(e)

    def certifies(self, N, budget: int = DEFAULT_BUDGET) -> bool:
        """Is ``|e**u - P/Q| < Q**-N`` certified by this stage?"""
        if self.Q <= 1:
            return False
        return mag_leq_power(self.total_error, Magnitude.of(self.Q), N, budget, strict=True)

    def to_json(self) -> dict:
        return {"n": str(self.n), "L": str(self.L), **self.claims}


def _layout_ok(cf: ContinuedFractionExpansion, filler: int) -> bool:
    qs = cf.quotients
    p = len(JARNIK_PREFIX)
    if cf.integer_part != -1 or qs[:p] != JARNIK_PREFIX or len(qs) < p + 1 or (len(qs) - p) % 2 != 1:
        return False
    return all(qs[i] == filler for i in range(p, len(qs), 2))


def _degree(rule, n: int) -> int:
    fn = forced_schedule(rule) if isinstance(rule, str) else rule
    return int(fn(n))


def exp_of_jarnik_certificate(u: JarnikTarget, n: int, L_rule=DEFAULT_L_RULE, budget: int | None = None) -> SelfPowerStage:
    """Stage ``n`` of the self-power certificate built on ``u``."""
    budget = budget or u.budget
    L = _degree(L_rule, n)
    return SelfPowerStage(n, L, normalize(derive_stage(u.cf, u.filler, n, L, budget)))


@dataclass(frozen=True)
class SelfPowerCertificate:
    target: JarnikTarget
    L_rule: str
    stages: tuple
    budget: int

    def to_json(self) -> dict:
        exps = [s.achieved_exponent for s in self.stages]
        return {
            "schema_version": SCHEMA_VERSION,
            "type": "selfpower",
            "schedule": None,
            "digits": None,
            "source": {
                "kind": "jarnik",
                "cf": self.target.cf.to_json(),
                "filler": str(self.target.filler),
                "forced": self.target.forced,
            },
            "L_rule": self.L_rule,
            "budget": str(self.budget),
            "constants": {"exp_lipschitz": "1"},
            "stages": [s.to_json() for s in self.stages],
            "verdict": {"stage_count": str(len(self.stages)), "max_achieved_exponent": max_exponent_json(exps)},
        }

    def achieved_table(self) -> list:
        return [(s.n, s.achieved_exponent) for s in self.stages]


def build_selfpower_certificate(u: JarnikTarget, stages=None, L_rule: str = DEFAULT_L_RULE, budget: int | None = None) -> SelfPowerCertificate:
    budget = budget or u.budget
    ns = [s.n for s in u.stages] if stages is None else list(stages)
    built = tuple(exp_of_jarnik_certificate(u, n, L_rule, budget) for n in ns)
    return SelfPowerCertificate(u, L_rule, built, budget)


def verify_selfpower(doc: dict, budget: int | None = None) -> Verdict:
    r = Reader(doc)
    src = r.obj("source")
    if src.str("kind") != "jarnik":
        raise MalformedCertificateError("selfpower source must be a Jarnik target")
    cfr = src.obj("cf")
    try:
        cf = ContinuedFractionExpansion(cfr.int("integer_part"), tuple(cfr.int_list("quotients")))
    except DomainError as exc:
        return Verdict(False, "rejected", [("source", "quotients", str(exc))])
    filler = src.int("filler")
    forced = src.str("forced")
    rule = r.str("L_rule")
    budget = r.int("budget") if budget is None else budget
    failures, table = [], []
    check_constants(r, {"exp_lipschitz": "1"}, failures)
    if filler < 1 or not _layout_ok(cf, filler):
        failures.append(("source", "layout", "quotients do not follow the filler/forced layout"))
    try:
        forced_fn = forced_schedule(forced)
    except ValueError:
        forced_fn = None
    try:
        rule_fn = forced_schedule(rule)
    except ValueError:
        raise MalformedCertificateError(f"unknown L_rule {rule!r}") from None
    exps = []
    for i, raw in enumerate(r.list("stages")):
        sr = Reader(raw, f"$.stages[{i}]")
        n, L = sr.int("n"), sr.int("L")
        label = str(n)
        if n < 1 or L < 1 or L != rule_fn(n):
            failures.append((label, "degree", f"L={L} does not follow {rule}"))
            continue
        try:
            derived = normalize(derive_stage(cf, filler, n, L, budget))
        except DomainError as exc:
            failures.append((label, "domain", str(exc)))
            continue
        if forced_fn is not None and int(derived["forced_quotient"]) != forced_fn(n):
            failures.append((label, "forced_quotient", f"expected {forced_fn(n)}"))
        stored = {k: v for k, v in raw.items() if k not in ("n", "L")}
        for path in diff_claims(stored, derived):
            failures.append((label, path, "stored value differs from recomputation"))
        if derived["exp_check"] != PASS:
            failures.append((label, "exp_check", "e^u is not within the claimed error of P/Q"))
        e = derived["achieved_exponent"]
        exp = None if e is None else IntervalReal.from_json(e)
        exps.append(exp)
        table.append((label, exp))
    verdict = normalize({"stage_count": str(len(r.list("stages"))), "max_achieved_exponent": max_exponent_json(exps)})
    if r.raw("verdict") != verdict:
        failures.append(("verdict", "verdict", "summary differs from recomputation"))
    return _finish(failures, table, bool(r.list("stages")))


def _finish(failures, table, nonempty: bool) -> Verdict:
    if failures:
        return Verdict(False, "rejected", failures, table)
    return Verdict(True, "accepted" if nonempty else "vacuous", [], table)
