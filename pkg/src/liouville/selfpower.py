"""Certified analysis of ``f(x) = x**x`` and ``phi(t) = t log t``.

``f = exp(phi)`` has its only critical point at ``1/e`` where it attains
``e**(-1/e)``.  On ``[delta, 1]`` with ``delta > 1/e`` the derivative
``f'(x) = x**x (log x + 1)`` is increasing because
``f''(x) = x**x ((log x + 1)**2 + 1/x) > 0``, so its extreme values sit at
the endpoints.
"""

from __future__ import annotations

import csv
import io
import math
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import gmpy2
from gmpy2 import mpfr, mpq, mpz

from .errors import AmbiguousEnclosureError, DomainError, PrecisionInsufficientError, TrichotomyAmbiguousError
from .interval import (
    DEFAULT_BUDGET,
    GUARD_BITS,
    MPQ,
    IntervalReal,
    ceil_q,
    e_inv,
    floor_q,
    interval_exp,
    interval_log,
    rat,
    rat_str,
    self_power_minimum,
)

_SMALL_SLOPE = mpq(1, 10**6)


def _as_interval(x, budget: int | None) -> IntervalReal:
    if isinstance(x, IntervalReal):
        return x if budget is None else x.with_budget(budget)
    return IntervalReal.exact(x, budget or DEFAULT_BUDGET)


def _phi_point(x: MPQ, budget: int) -> IntervalReal:
    x = IntervalReal.exact(x, budget)
    return x * interval_log(x)


def phi(x, budget: int | None = None) -> IntervalReal:
    """Enclosure of ``t log t`` over a positive enclosure, using branch monotonicity."""
    x = _as_interval(x, budget)
    if x.lower <= 0:
        raise DomainError("t log t needs t > 0")
    b = x.budget
    if x.is_exact():
        return _phi_point(x.lower, b)
    lo, hi = _phi_point(x.lower, b), _phi_point(x.upper, b)
    c = e_inv(b + GUARD_BITS)
    if x.upper <= c.lower:
        return IntervalReal(hi.lower, lo.upper, b)
    if x.lower >= c.upper:
        return IntervalReal(lo.lower, hi.upper, b)
    return IntervalReal(-c.upper, max(lo.upper, hi.upper), b)


def self_power(x, budget: int | None = None) -> IntervalReal:
    """Certified enclosure of ``x**x`` for ``x > 0``."""
    x = _as_interval(x, budget)
    if x.lower <= 0:
        raise DomainError("x**x needs x > 0")
    if x.is_exact() and x.lower.denominator == 1:
        n = int(x.lower)
        return IntervalReal.exact(mpz(n) ** n, x.budget)
    return interval_exp(phi(x))


def self_power_derivative(x, budget: int | None = None) -> IntervalReal:
    """Enclosure of ``x**x (log x + 1)`` (valid for enclosures inside one monotone piece)."""
    x = _as_interval(x, budget)
    return self_power(x) * (interval_log(x) + 1)


@dataclass(frozen=True)
class DerivativeBounds:
    delta: MPQ
    lower: IntervalReal  # f'(delta)
    upper: IntervalReal  # f'(1) = 1


def derivative_bounds(delta, budget: int = DEFAULT_BUDGET) -> DerivativeBounds:
    """Bounds ``m = f'(delta) <= f' <= M = 1`` on ``[delta, 1]`` for ``1/e < delta <= 1``."""
    delta = rat(delta)
    c = e_inv(budget + GUARD_BITS)
    if delta > 1 or delta <= c.lower:
        raise DomainError("derivative bounds need 1/e < delta <= 1")
    if delta < c.upper:
        raise DomainError("delta is not certifiably above 1/e at this budget")
    m = self_power_derivative(IntervalReal.exact(delta, budget))
    if m.lower < _SMALL_SLOPE:
        warnings.warn(f"lower slope {float(m.lower):.3g} is nearly zero; delta is close to 1/e", RuntimeWarning)
    return DerivativeBounds(delta, m, IntervalReal.exact(1, budget))


def phi_lipschitz(delta, budget: int = DEFAULT_BUDGET) -> IntervalReal:
    """``max(1, -log delta - 1)``, the sup of ``|log t + 1|`` over ``[delta, 1]``."""
    d = _as_interval(delta, budget)
    if d.lower <= 0 or d.upper >= 1:
        raise DomainError("phi Lipschitz bound needs 0 < delta < 1")
    return (-interval_log(d) - 1).max_with(1)


# ---------------------------------------------------------------------------
# inversion
# ---------------------------------------------------------------------------


def _approx_root(v: MPQ, branch: str, prec: int, c: MPQ) -> MPQ:
    """Floating approximation of the branch solution of ``t log t = v``."""
    with gmpy2.context(precision=prec):
        vv = mpfr(v)
        if branch == "lower":
            lo, hi = mpfr(0), mpfr(c)
        else:
            lo = mpfr(c)
            hi = mpfr(2)
            while hi * gmpy2.log(hi) < vv:
                hi *= 2

        def g(t):
            return t * gmpy2.log(t) - vv

        # bisection to ~64 bits, then Newton
        for _ in range(64):
            mid = (lo + hi) / 2
            if mid == 0:
                break
            gm = g(mid)
            if (gm > 0) == (branch == "upper"):
                hi = mid
            else:
                lo = mid
        t = (lo + hi) / 2
        for _ in range(2 * max(1, int(math.log2(max(prec, 64) / 32)) + 1)):
            d = gmpy2.log(t) + 1
            if d == 0:
                break
            nt = t - g(t) / d
            if nt <= 0:
                break
            t = nt
        return mpq(t)


def _branch_point(v: MPQ, branch: str, budget: int, c: IntervalReal) -> IntervalReal:
    """Certified enclosure of the branch preimage of the exact value ``v``."""
    if v == 0 and branch == "upper":
        return IntervalReal.exact(1, budget)
    r = _approx_root(v, branch, budget + 2 * GUARD_BITS, c.lower if branch == "lower" else c.upper)
    w = mpq(1, 1 << (budget + GUARD_BITS))
    for _ in range(64):
        a, b = max(r - w, r / 2), r + w
        if branch == "lower":
            # phi decreasing on (0, 1/e): need phi(a) > v > phi(b)
            if b >= c.lower:
                ok_b, b = True, c.upper
            else:
                ok_b = _phi_point(b, budget).certainly_lt(v)
            ok_a = _phi_point(a, budget).certainly_gt(v)
        else:
            # phi increasing on (1/e, oo): need phi(a) < v < phi(b)
            if a <= c.upper:
                ok_a, a = True, c.lower
            else:
                ok_a = _phi_point(a, budget).certainly_lt(v)
            ok_b = _phi_point(b, budget).certainly_gt(v)
        if ok_a and ok_b:
            return IntervalReal(a, b, budget)
        w *= 1 << 8
    raise AmbiguousEnclosureError(f"could not certify the {branch} preimage of {v}")


def invert_xlogx(u, branch: str, budget: int | None = None) -> IntervalReal:
    """Enclosure of the ``branch`` preimage of ``u`` under ``t log t``.

    ``lower`` is the decreasing piece on ``(0, 1/e)``, ``upper`` the
    increasing piece on ``(1/e, oo)``.  When ``u`` touches ``-1/e`` the
    enclosure reaches ``1/e`` to cover the meeting point.
    """
    if branch not in ("lower", "upper"):
        raise ValueError("branch must be 'lower' or 'upper'")
    u = _as_interval(u, budget)
    b = u.budget
    c = e_inv(b + GUARD_BITS)
    if u.upper < -c.upper:
        raise DomainError("t log t never goes below -1/e")
    if branch == "lower" and u.lower >= 0:
        raise DomainError("the lower branch only takes values in [-1/e, 0)")
    if branch == "lower" and u.upper >= 0:
        raise AmbiguousEnclosureError("enclosure reaches 0, where the lower branch is empty")
    near_min = u.lower <= -c.lower

    def point(v):
        if v <= -c.lower:
            return IntervalReal(c.lower, c.upper, b)
        return _branch_point(v, branch, b, c)

    hi_pt = point(u.upper)
    if near_min:
        lo_pt = IntervalReal(c.lower, c.upper, b)
    else:
        lo_pt = point(u.lower) if not u.is_exact() else hi_pt
    return lo_pt.hull(hi_pt)


def invert_self_power(y, budget: int | None = None, assume_minimum: bool = False) -> list:
    """All preimages of ``y`` under ``x**x`` on ``x > 0`` as enclosures.

    Zero preimages below ``e**(-1/e)``, two strictly between it and 1, one at
    or above 1.  An enclosure overlapping ``e**(-1/e)`` is ambiguous unless
    ``assume_minimum`` states that ``y`` is exactly the minimum, in which
    case ``[1/e]`` is returned.
    """
    y = _as_interval(y, budget)
    if y.lower <= 0:
        raise DomainError("x**x is positive")
    b = y.budget
    mu = self_power_minimum(b + GUARD_BITS)
    if y.upper < mu.lower:
        return []
    if y.lower <= mu.upper:
        if assume_minimum:
            return [e_inv(b)]
        raise TrichotomyAmbiguousError("enclosure overlaps e^(-1/e)")
    if y.is_exact() and y.lower == 1:
        return [IntervalReal.exact(1, b)]
    if y.lower < 1 <= y.upper:
        raise TrichotomyAmbiguousError("enclosure overlaps 1")
    u = interval_log(y)
    if y.lower >= 1:
        return [invert_xlogx(u, "upper")]
    return [invert_xlogx(u, "lower"), invert_xlogx(u, "upper")]


# ---------------------------------------------------------------------------
# non-Liouville exclusion scan
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Violation:
    a: int
    b: int
    gap: IntervalReal  # enclosure of |xi**xi - a/b|
    gap_sign: str  # sign of xi**xi - a/b; "0" when undetermined

    @property
    def certified_gap(self) -> MPQ:
        return self.gap.upper


@dataclass(frozen=True)
class ExclusionReport:
    xi: IntervalReal
    tau: MPQ
    b_max: int
    window: str
    scanned: int
    cleared: int
    violations: tuple = field(default=())

    @property
    def clean(self) -> bool:
        return not self.violations

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["a", "b", "gap_sign", "certified_gap"])
        for v in self.violations:
            w.writerow([v.a, v.b, v.gap_sign, rat_str(v.certified_gap)])
        return buf.getvalue()

    def to_json(self) -> dict:
        return {
            "xi": self.xi.to_json(),
            "tau": rat_str(self.tau),
            "b_max": self.b_max,
            "window": self.window,
            "scanned": self.scanned,
            "cleared": self.cleared,
            "violations": [
                {"a": str(v.a), "b": str(v.b), "gap_sign": v.gap_sign, "gap": v.gap.to_json()} for v in self.violations
            ],
        }


def _tau_power(b: int, tau: MPQ, budget: int) -> IntervalReal:
    """Enclosure of ``b**-tau``."""
    if tau.denominator == 1:
        return IntervalReal.exact(mpq(1, mpz(b) ** int(tau)), budget)
    return interval_exp(-interval_log(IntervalReal.exact(b, budget)) * tau)


def _scan_range(F: IntervalReal, tau: MPQ, b_lo: int, b_hi: int, window: str):
    out, undecided, scanned, cleared = [], [], 0, 0
    for b in range(b_lo, b_hi + 1):
        eps = _tau_power(b, tau, F.budget)
        lo, hi = F.lower, F.upper
        if window == "tau":
            lo, hi = lo - eps.upper, hi + eps.upper
        for a in range(max(1, ceil_q(lo * b)), floor_q(hi * b) + 1):
            if math.gcd(a, b) != 1:
                continue
            scanned += 1
            q = mpq(a, b)
            diff = F - q
            gap = abs(diff)
            sign = "+" if diff.lower > 0 else "-" if diff.upper < 0 else "0"
            if gap.upper < eps.lower:
                out.append(Violation(a, b, gap, sign))
            elif gap.lower >= eps.upper:
                cleared += 1
            else:
                undecided.append((a, b))
    return out, undecided, scanned, cleared


def non_liouville_scan(xi, tau, b_max: int, window: str = "enclosure", jobs: int = 1, budget: int | None = None) -> ExclusionReport:
    """Classify rationals ``a/b`` (reduced, ``b <= b_max``) against ``|xi**xi - a/b| < b**-tau``.

    ``window="enclosure"`` scans the fractions inside the enclosure of
    ``xi**xi``; ``window="tau"`` also scans those within ``b**-tau`` of it,
    so a clean report certifies every fraction with ``b <= b_max``.
    """
    xi = _as_interval(xi, budget)
    tau = rat(tau)
    if tau <= 2:
        raise DomainError("tau must exceed 2")
    if window not in ("enclosure", "tau"):
        raise ValueError("window must be 'enclosure' or 'tau'")
    c = e_inv(xi.budget + GUARD_BITS)
    if xi.lower <= c.upper or xi.upper > 1:
        raise DomainError("xi must lie in (1/e, 1]")
    if b_max <= 0:
        return ExclusionReport(xi, tau, max(0, b_max), window, 0, 0, ())
    F = self_power(xi)
    jobs = max(1, min(jobs, b_max))
    if jobs == 1:
        parts = [_scan_range(F, tau, 1, b_max, window)]
    else:
        bounds = [(1 + i * b_max // jobs, (i + 1) * b_max // jobs) for i in range(jobs)]
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            parts = list(ex.map(_scan_range, [F] * jobs, [tau] * jobs, *zip(*bounds), [window] * jobs))
    viol = sorted((v for p in parts for v in p[0]), key=lambda v: (v.b, v.a))
    undecided = sorted((u for p in parts for u in p[1]), key=lambda t: (t[1], t[0]))
    if undecided:
        raise PrecisionInsufficientError(f"{len(undecided)} pairs undecided at budget {xi.budget}", undecided)
    return ExclusionReport(xi, tau, b_max, window, sum(p[2] for p in parts), sum(p[3] for p in parts), tuple(viol))


# ---------------------------------------------------------------------------
# Hausdorff content series
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class HausdorffPartial:
    exponent: MPQ  # 1 - s*tau
    b_range: tuple
    value: MPQ | None  # exact when the exponent is an integer
    enclosure: IntervalReal
    verdict: str  # "convergent-regime" iff s*tau > 2


def hausdorff_series_partial(s, tau, b_range, budget: int = DEFAULT_BUDGET) -> HausdorffPartial:
    """Partial sum of ``sum b**(1 - s*tau)`` over ``b_range = (lo, hi)`` inclusive."""
    s, tau = rat(s), rat(tau)
    lo, hi = int(b_range[0]), int(b_range[1])
    if lo < 1 or hi < lo:
        raise DomainError("b_range must be a nonempty range of positive integers")
    k = 1 - s * tau
    verdict = "convergent-regime" if s * tau > 2 else "divergent-regime"
    if k.denominator == 1:
        k = int(k)
        total = sum((mpq(mpz(b) ** k) if k >= 0 else mpq(1, mpz(b) ** -k)) for b in range(lo, hi + 1))
        return HausdorffPartial(mpq(k), (lo, hi), total, IntervalReal.exact(total, budget), verdict)
    enc = IntervalReal.exact(0, budget)
    for b in range(lo, hi + 1):
        enc = enc + interval_exp(interval_log(IntervalReal.exact(b, budget)) * k)
    return HausdorffPartial(k, (lo, hi), None, enc, verdict)


__all__ = [
    "DerivativeBounds",
    "ExclusionReport",
    "HausdorffPartial",
    "Violation",
    "derivative_bounds",
    "hausdorff_series_partial",
    "invert_self_power",
    "invert_xlogx",
    "non_liouville_scan",
    "phi",
    "phi_lipschitz",
    "self_power",
    "self_power_derivative",
]
