"""Integer polynomials evaluated at spiffy numbers sharing one schedule.

At level ``m`` all inputs have denominator ``q_m``, so ``R_m = P(r_m)`` has
denominator dividing ``q_m**D``.  On the unit cube the partial derivatives
are bounded by ``M = max_j sum |c| * alpha_j``, and with ``C = 3 M t``

    |P(x) - R_m| <= C * max_j tail_j.

A linear ``P`` whose coefficients cancel on every class of inputs with
identical digit tails has ``P(x) = R_m`` exactly; that case is reported as
rational instead of as a Liouville stage.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from gmpy2 import mpq, mpz

from ..errors import DomainError, MalformedCertificateError, MixedScheduleError, UnmaterializableError
from ..interval import DEFAULT_BUDGET, IntervalReal, rat_str
from ..magnitude import ZERO, Magnitude, mag_mul
from ..schedule import DigitSequence, ExponentSchedule, SpiffyNumber, tail_bound, truncate
from .common import (
    check_constants,
    PASS,
    FAIL,
    SCHEMA_VERSION,
    Reader,
    Verdict,
    achieved_exponent,
    diff_claims,
    enc_json,
    mag_max,
    max_exponent_json,
    normalize,
)

_VAR_ORDER = "XYZWUVST"


@dataclass(frozen=True)
class Polynomial:
    """Sum of ``coeff * prod(X_j ** alpha_j)`` over ``nvars`` variables."""

    nvars: int
    monomials: tuple  # ((coeff, (alpha_1, ..., alpha_t)), ...) merged and sorted

    @classmethod
    def from_terms(cls, nvars: int, terms) -> "Polynomial":
        acc = {}
        for c, exps in terms:
            exps = tuple(int(e) for e in exps)
            if len(exps) != nvars or any(e < 0 for e in exps):
                raise DomainError("exponent vector does not match the variable count")
            acc[exps] = acc.get(exps, 0) + int(c)
        mons = tuple(sorted(((c, e) for e, c in acc.items() if c), key=lambda t: t[1]))
        return cls(nvars, mons)

    @property
    def degree(self) -> int:
        return max((sum(e) for _, e in self.monomials), default=0)

    def __call__(self, *xs):
        total = mpq(0)
        for c, exps in self.monomials:
            term = mpq(c)
            for x, a in zip(xs, exps):
                if a:
                    term *= x**a
            total += term
        return total

    def gradient_bound(self) -> int:
        """``max_j sum |c| alpha_j``, a bound for ``|dP/dX_j|`` on ``[0,1]**t``."""
        if self.nvars == 0:
            return 0
        return max(sum(abs(c) * e[j] for c, e in self.monomials) for j in range(self.nvars))

    def linear_coefficients(self):
        """Coefficients of ``X_j`` if ``P`` has degree at most one, else None."""
        if self.degree > 1:
            return None
        coeffs = [0] * self.nvars
        for c, e in self.monomials:
            for j, a in enumerate(e):
                if a:
                    coeffs[j] += c
        return coeffs

    def to_json(self) -> dict:
        return {"nvars": str(self.nvars), "monomials": [[str(c), [str(a) for a in e]] for c, e in self.monomials]}

    @classmethod
    def from_json(cls, data: dict) -> "Polynomial":
        r = Reader(data, "$.polynomial")
        nvars = r.int("nvars")
        terms = []
        for i, mon in enumerate(r.list("monomials")):
            if not (isinstance(mon, list) and len(mon) == 2 and isinstance(mon[1], list)):
                raise MalformedCertificateError(f"$.polynomial.monomials[{i}]: expected [coeff, exponents]")
            try:
                terms.append((int(str(mon[0])), [int(str(a)) for a in mon[1]]))
            except ValueError:
                raise MalformedCertificateError(f"$.polynomial.monomials[{i}]: not integers") from None
        poly = cls(nvars, tuple((c, tuple(e)) for c, e in terms))
        return poly

    def __str__(self):
        names = variable_names(self.nvars)
        parts = []
        for c, e in self.monomials:
            factors = [f"{n}^{a}" if a > 1 else n for n, a in zip(names, e) if a]
            body = "*".join(factors)
            mag = abs(c)
            s = body if body and mag == 1 else f"{mag}*{body}" if body else str(mag)
            parts.append(("-" if c < 0 else "+") + s)
        text = "".join(parts) or "0"
        return text[1:] if text.startswith("+") else text


def variable_names(n: int) -> list:
    if n <= len(_VAR_ORDER):
        return list(_VAR_ORDER[:n])
    return [f"X{i}" for i in range(1, n + 1)]


_TOKEN = re.compile(r"\s*([+-])?\s*([^+-]+)")


def parse_polynomial(text: str, nvars: int | None = None) -> Polynomial:
    """Parse ``3*X^2*Y - 2*Z + 5``; integer factors may be powers like ``3^27``.

    Variables are ``X, Y, Z, W, U, V, S, T`` (in that order) or ``X1, X2, ...``.
    """
    src = text.replace(" ", "")
    if not src:
        raise ValueError("empty polynomial")
    raw_terms = []
    pos = 0
    for m in re.finditer(r"([+-]?)([^+-]+)", src):
        if m.start() != pos:
            raise ValueError(f"cannot parse polynomial {text!r}")
        pos = m.end()
        sign = -1 if m.group(1) == "-" else 1
        coeff, powers = sign, {}
        for f in m.group(2).split("*"):
            fm = re.fullmatch(r"(\d+)(?:\^(\d+))?", f)
            if fm:
                coeff *= int(fm.group(1)) ** int(fm.group(2) or 1)
                continue
            fm = re.fullmatch(r"(X\d+|[XYZWUVST])(?:\^(\d+))?", f)
            if not fm:
                raise ValueError(f"bad factor {f!r} in {text!r}")
            powers[fm.group(1)] = powers.get(fm.group(1), 0) + int(fm.group(2) or 1)
        raw_terms.append((coeff, powers))
    if pos != len(src):
        raise ValueError(f"cannot parse polynomial {text!r}")
    used = {v for _, p in raw_terms for v in p}
    indexed = any(v.startswith("X") and len(v) > 1 for v in used)
    if indexed:
        if any(len(v) == 1 for v in used):
            raise ValueError("mix of X1.. and single-letter variables")
        need = max(int(v[1:]) for v in used)
        names = [f"X{i}" for i in range(1, need + 1)]
    else:
        need = max((_VAR_ORDER.index(v) + 1 for v in used), default=0)
        names = list(_VAR_ORDER[:need])
    n = need if nvars is None else nvars
    if n < need:
        raise ValueError(f"polynomial uses {need} variables but nvars={n}")
    if indexed:
        names = [f"X{i}" for i in range(1, n + 1)]
    else:
        names = list(_VAR_ORDER[:n]) if n <= len(_VAR_ORDER) else names
    terms = [(c, [p.get(v, 0) for v in names]) for c, p in raw_terms]
    return Polynomial.from_terms(n, terms)


def _escape_classes(P: Polynomial, inputs, m: int):
    """True when a linear P cancels on every class of identical tails past ``m``."""
    coeffs = P.linear_coefficients()
    if coeffs is None:
        return False
    live = [j for j, x in enumerate(inputs) if not tail_bound(x, m).refined.is_zero()]
    classes = []
    for j in live:
        for cls in classes:
            same = inputs[cls[0]].digits.tail_equal(inputs[j].digits, m)
            if same is None:
                return False
            if same:
                cls.append(j)
                break
        else:
            classes.append([j])
    return all(sum(coeffs[j] for j in cls) == 0 for cls in classes)


def derive_stage(P: Polynomial, inputs, m: int, budget: int) -> dict:
    if len(inputs) != P.nvars:
        raise DomainError(f"polynomial has {P.nvars} variables but {len(inputs)} inputs")
    if m < 1:
        raise DomainError("level must be positive")
    schedule = inputs[0].schedule
    rs = [truncate(x, m) for x in inputs]
    R = P(*rs)
    e_m = schedule.exponent_int(m)
    D = P.degree
    den_ok = (mpz(3) ** (e_m * D)) % R.denominator == 0
    M = P.gradient_bound()
    C = 3 * M * P.nvars
    tails = [tail_bound(x, m).refined for x in inputs]
    tmax = mag_max(tails, budget) if tails else ZERO
    error = ZERO if C == 0 or tmax.is_zero() else mag_mul(Magnitude.of(C), tmax, budget)
    rational = _escape_classes(P, inputs, m)
    return {
        "R": rat_str(R),
        "degree": str(D),
        "denominator_divides_q_pow_D": PASS if den_ok else FAIL,
        "M": str(M),
        "C": str(C),
        "error": error.to_json(),
        "achieved_exponent": None if rational else enc_json(achieved_exponent(error, int(R.denominator), budget)),
        "verdict": "rational" if rational else "liouville-stage",
    }


@dataclass(frozen=True)
class PolynomialClosureCertificate:
    P: Polynomial
    inputs: tuple
    levels: tuple
    stages: tuple  # claims per level
    budget: int

    @property
    def stage(self) -> dict:
        return self.stages[-1]

    @property
    def R(self):
        from ..interval import parse_rat

        return parse_rat(self.stage["R"])

    @property
    def error(self) -> Magnitude:
        return Magnitude.from_json(self.stage["error"])

    @property
    def verdict(self) -> str:
        return self.stage["verdict"]

    @property
    def achieved_exponent(self):
        e = self.stage["achieved_exponent"]
        return None if e is None else IntervalReal.from_json(e)

    def to_json(self) -> dict:
        stages = [{"m": str(m), **s} for m, s in zip(self.levels, self.stages)]
        exps = [None if s["achieved_exponent"] is None else IntervalReal.from_json(s["achieved_exponent"]) for s in self.stages]
        return {
            "schema_version": SCHEMA_VERSION,
            "type": "poly",
            "schedule": self.inputs[0].schedule.to_json(),
            "digits": [x.digits.to_json() for x in self.inputs],
            "polynomial": self.P.to_json(),
            "budget": str(self.budget),
            "constants": {"C_rule": "3*M*t"},
            "stages": stages,
            "verdict": _verdict(self.stages, exps),
        }


def _verdict(stages, exps) -> dict:
    return normalize(
        {
            "stage_count": str(len(stages)),
            "rational_at": [s["R"] for s in stages if s["verdict"] == "rational"][:1],
            "max_achieved_exponent": max_exponent_json(exps),
        }
    )


def poly_closure_certificate(P, inputs, m, budget: int = DEFAULT_BUDGET) -> PolynomialClosureCertificate:
    """Certificate for ``P(inputs)`` at level ``m`` (an int or a list of levels)."""
    if isinstance(P, str):
        P = parse_polynomial(P, len(inputs))
    inputs = tuple(inputs)
    if not inputs:
        raise DomainError("need at least one input")
    if any(x.schedule != inputs[0].schedule for x in inputs):
        raise MixedScheduleError("all inputs must share one exponent schedule")
    levels = (m,) if isinstance(m, int) else tuple(m)
    stages = tuple(normalize(derive_stage(P, inputs, lv, budget)) for lv in levels)
    return PolynomialClosureCertificate(P, inputs, levels, stages, budget)


def verify_poly(doc: dict, budget: int | None = None) -> Verdict:
    r = Reader(doc)
    budget = r.int("budget") if budget is None else budget
    try:
        schedule = ExponentSchedule.from_json(r.raw("schedule"))
        inputs = [SpiffyNumber(schedule, DigitSequence.from_json(d)) for d in r.list("digits")]
        P = Polynomial.from_json(r.raw("polynomial"))
        P = Polynomial.from_terms(P.nvars, P.monomials)
    except (KeyError, TypeError) as exc:
        raise MalformedCertificateError(f"bad inputs: {exc}") from None
    except ValueError as exc:
        return Verdict(False, "rejected", [("input", "inputs", str(exc))])
    failures, table, stages = [], [], []
    check_constants(r, {"C_rule": "3*M*t"}, failures)
    raw_poly = r.raw("polynomial")
    if normalize(P.to_json()) != raw_poly:
        failures.append(("input", "polynomial", "monomials not in canonical merged form"))
    for i, raw in enumerate(r.list("stages")):
        sr = Reader(raw, f"$.stages[{i}]")
        m = sr.int("m")
        label = str(m)
        try:
            derived = normalize(derive_stage(P, inputs, m, budget))
        except (DomainError, UnmaterializableError) as exc:
            failures.append((label, "domain", str(exc)))
            continue
        stored = {k: v for k, v in raw.items() if k != "m"}
        for path in diff_claims(stored, derived):
            failures.append((label, path, "stored value differs from recomputation"))
        if derived["denominator_divides_q_pow_D"] != PASS:
            failures.append((label, "denominator_divides_q_pow_D", "B_m does not divide q_m^D"))
        stages.append(derived)
        e = derived["achieved_exponent"]
        table.append((label, None if e is None else IntervalReal.from_json(e)))
    if not failures and r.raw("verdict") != _verdict(stages, [e for _, e in table]):
        failures.append(("verdict", "verdict", "summary differs from recomputation"))
    if failures:
        return Verdict(False, "rejected", failures, table)
    return Verdict(True, "accepted" if stages else "vacuous", [], table)
