"""Acceptance criteria, one test per criterion.

Tolerances are pinned in each test.  A criterion that the construction
cannot meet is still checked as stated; its failure is expected and is
analysed in the decision ledger rather than relaxed here.
"""

import json
import math
import os
import random
import subprocess
import sys
import time
from pathlib import Path

import mpmath
import pytest
from gmpy2 import mpq

from liouville.certify import (
    build_pairwise_certificate,
    build_selfpower_certificate,
    build_tuned_certificate,
    dumps,
    poly_closure_certificate,
    Polynomial,
)
from liouville.cli import _certifies, main
from liouville.diophantine import cf_convergents, exp_taylor_rational, jarnik_generate, lcm_upto
from liouville.interval import IntervalReal, e_inv, self_power_minimum
from liouville.magnitude import Magnitude, mag_compare, materialization_cap
from liouville.schedule import DigitSequence, ExponentSchedule, SpiffyNumber, epsilon_strong_check, liouville_exponent_lower, truncate
from liouville.selfpower import invert_self_power, self_power

from tamper import perturb

FACT = ExponentSchedule.factorial(1)
REF = json.loads((Path(__file__).parent / "golden" / "reference.json").read_text())
ROOT = Path(__file__).resolve().parents[1]


def fact(digits=None):
    return SpiffyNumber(FACT, digits or DigitSequence.all2())


def test_c01_tail_bound_exactness():
    """|r_(m+3) - r_m| <= 3 * 3^-e_(m+1) exactly, m = 1..7, under 10 s."""
    x = fact()
    start = time.perf_counter()
    with materialization_cap(1 << 27):
        for m in range(1, 8):
            gap = abs(truncate(x, m + 3) - truncate(x, m))
            assert gap <= 3 * mpq(1, 3 ** FACT.exponent_int(m + 1)), m
    assert time.perf_counter() - start < 10


def test_c02_exponent_growth():
    """Guaranteed exponent equals (e_(m+1) - 1)/e_m and is at least m+1 for m <= 7."""
    x = fact()
    for m in range(1, 8):
        g = liouville_exponent_lower(x, m).guaranteed
        e, e1 = FACT.exponent_int(m), FACT.exponent_int(m + 1)
        assert g == mpq(e1 - 1, e) and g >= m + 1


def test_c03_epsilon_strong_transition():
    """eps = 1 on the paper tower: fails at m=1, passes at m=2 (exact comparison)."""
    x = SpiffyNumber.paper()
    r1, r2 = epsilon_strong_check(x, 1, 1), epsilon_strong_check(x, 1, 2)
    assert not r1.passed and r1.achieved == mpq(26, 3)
    assert abs(r1.required.mid - mpq(1086, 100)) < mpq(1, 100)
    assert r2.passed
    assert abs(r2.achieved - mpq(282, 1) * 10**9) < 10**9
    assert abs(r2.required.mid - mpq(8799, 10)) < 1


def test_c04_taylor_suite():
    """500 samples: remainder bound vs 80-digit e^U (slack 1e-80) and Q | B^L lcm(1..L)."""
    assert exp_taylor_rational(mpq(-1, 2), 3).value == mpq(29, 48)
    assert exp_taylor_rational(-1, 2).value == mpq(1, 2)
    rng = random.Random(4)
    start = time.perf_counter()
    lcm_misses = []
    mpmath.mp.dps = 100
    slack = mpmath.mpf(10) ** -80
    for _ in range(500):
        den = rng.randint(1, 10**4)
        U = -mpq(rng.randint(0, den), den)
        L = rng.randint(1, 20)
        a = exp_taylor_rational(U, L)
        oracle = mpmath.exp(mpmath.mpf(int(U.numerator)) / int(U.denominator))
        err = abs(oracle - mpmath.mpf(int(a.P)) / a.Q)
        rem = a.remainder_bound.value
        assert err <= mpmath.mpf(int(rem.numerator)) / int(rem.denominator) + slack
        assert a.certificate["factorial_form"]
        if not a.certificate["lcm_form"]:
            lcm_misses.append((U, L))
    assert time.perf_counter() - start < 30
    assert not lcm_misses, f"{len(lcm_misses)} samples violate Q | B^L lcm(1..L), e.g. {lcm_misses[:3]}"


def test_c05_lcm_growth():
    """log lcm(1..L)/L within 0.02 of an independent oracle at L = 10, 100, 1000."""
    mpmath.mp.dps = 30
    for L, expected in ((10, 0.7832), (100, 0.9405), (1000, 0.9967)):
        oracle = mpmath.log(math.lcm(*range(1, L + 1))) / L
        assert abs(oracle - expected) < 1e-3
        _, log_lcm = lcm_upto(L)
        assert abs(float(log_lcm.mid) / L - float(oracle)) <= 0.02


def test_c06_cf_invariants():
    """Determinant identity and error sandwich on 100 random finite expansions."""
    rng = random.Random(6)
    for _ in range(100):
        qs = [rng.randint(1, 1000) for _ in range(rng.randint(1, 30))]
        cf = cf_convergents(qs, rng.randint(-5, 5))
        conv = cf.convergents
        for k in range(1, len(conv)):
            (p0, q0), (p1, q1) = conv[k - 1], conv[k]
            assert p1 * q0 - p0 * q1 == (-1) ** (k - 1)
        u, last = cf.value(), len(conv) - 1
        for k in range(last):
            p, q = conv[k]
            qn = conv[k + 1][1]
            err = abs(u - mpq(p, q))
            lo, hi = mpq(1, q * (qn + q)), mpq(1, q * qn)
            if k < last - 2:
                assert lo < err < hi
            else:
                assert lo <= err <= hi


def test_c07_jarnik_reference():
    """g(n) = 2^(2^n), filler 2, 4 stages: golden values, increasing exponents, final >= 8, under 20 s."""
    start = time.perf_counter()
    u = jarnik_generate("2^(2^n)", 2, 4)
    ref = REF["jarnik"]["stages"]
    assert [(str(s.A), str(s.B), str(s.q_next)) for s in u.stages] == [(r["A"], r["B"], r["q_next"]) for r in ref]
    assert time.perf_counter() - start < 20
    exps = [s.achieved_exponent for s in u.stages]
    shown = [round(float(e.mid), 4) for e in exps]
    assert all(a.upper < b.lower for a, b in zip(exps, exps[1:])), f"not increasing: {shown}"
    assert exps[-1].lower >= 8, f"final exponent {shown[-1]} < 8"


def test_c08_selfpower_targets():
    """From the 7-stage target, each N in {5, 10, 20} is certified by some stage; under 60 s."""
    start = time.perf_counter()
    u = jarnik_generate("2^(2^n)", 2, 7)
    cert = build_selfpower_certificate(u, None, "n^2")
    assert time.perf_counter() - start < 60
    shown = [round(float(s.achieved_exponent.mid), 4) for s in cert.stages]
    for N in (5, 10, 20):
        assert any(_certifies(s.total_error, s.Q, N, cert.budget) for s in cert.stages), f"N={N} not reached; achieved {shown}"


def test_c09_inversion_trichotomy():
    """200 samples: preimage count, roundtrip <= 1e-40 at a 60-digit budget, f(1/e) value within 1e-10."""
    budget = math.ceil(60 * math.log2(10))
    mu = self_power_minimum(budget)
    rng = random.Random(9)
    ys = [mpq(rng.randint(10**4, 3 * 10**6), 10**6) for _ in range(197)] + [mpq(1), mpq(69, 100), mpq(7, 10)]
    tol = mpq(1, 10**40)
    for y in ys:
        pre = invert_self_power(IntervalReal.exact(y, budget))
        assert len(pre) == (0 if y < mu.lower else 1 if y >= 1 else 2), y
        for x in pre:
            f = self_power(x)
            assert max(abs(f.upper - y), abs(f.lower - y)) <= tol
    v = self_power(e_inv(budget))
    target = mpq("0.6922006276")
    assert v.lower <= target + mpq(1, 10**10) and target - mpq(1, 10**10) <= v.upper


def test_c10_example_pair():
    """X - Y gives exactly 2/3^27; qX - qY - r gives exactly 0."""
    x = SpiffyNumber.paper()
    y = SpiffyNumber.paper(DigitSequence.all2().with_digit(2, 0))
    assert poly_closure_certificate("X-Y", [x, y], 2).R == mpq(2, 3**27)
    q = 3**27
    assert poly_closure_certificate(f"{q}*X-{q}*Y-2", [x, y], 2).R == 0


def _random_poly(rng, t):
    terms = [(rng.choice([c for c in range(-5, 6) if c]), tuple(rng.randint(0, 3) for _ in range(t))) for _ in range(rng.randint(1, 4))]
    return Polynomial.from_terms(t, terms)


def test_c11_polynomial_closure():
    """50 random polynomials, t <= 3, m <= 5: exact error bound against deep truncations; exponent >= m."""
    rng = random.Random(11)
    short = []
    for _ in range(50):
        t = rng.randint(1, 3)
        P = _random_poly(rng, t)
        xs = [fact(DigitSequence.constant(2, tuple(rng.choice((0, 2)) for _ in range(6)))) for _ in range(t)]
        m = rng.randint(1, 5)
        cert = poly_closure_certificate(P, xs, m)
        deep = P(*[truncate(x, m + 3) for x in xs])
        assert mag_compare(Magnitude.of(abs(deep - cert.R)), cert.error) <= 0
        if cert.verdict != "rational":
            e = cert.stage["achieved_exponent"]
            if e is None or IntervalReal.from_json(e).lower < m:
                short.append((str(P), m, None if e is None else round(float(IntervalReal.from_json(e).mid), 3)))
    assert not short, f"{len(short)} of 50 below exponent m, e.g. {short[:3]}"


def test_c12_pairwise_target():
    """Synchronized pair: frozen values, and N = 5 certified by stage k <= 3."""
    case = REF["pairwise"][0]
    x, y = fact(), fact(DigitSequence.all2().with_digit(case["flip"], 0))
    cert = build_pairwise_certificate(x, y, case["levels"])
    assert [s.achieved_exponent.to_json() for s in cert.stages] == case["certified"]
    shown = [round(float(s.achieved_exponent.mid), 4) for s in cert.stages]
    assert any(_certifies(s.total_error, s.Q, 5, cert.budget) for s in cert.stages[:3]), f"N=5 not reached; achieved {shown}"


def _tamper_inputs():
    x, y = fact(), fact(DigitSequence.all2().with_digit(6, 0))
    z = fact(DigitSequence.periodic((2, 0)))
    return {
        "selfpower": build_selfpower_certificate(jarnik_generate("2^(2^n)", 2, 3)),
        "tuned": build_tuned_certificate(x, [2, 3]),
        "poly": poly_closure_certificate("X*Y+Z^3-2*X", [x, y, z], [1, 2, 3]),
        "pairwise": build_pairwise_certificate(x, y, (2, 3, 4)),
    }


def test_c13_tamper_soundness(tmp_path, capsys):
    """100 single-field perturbations per certificate type, each rejected by the verify command with exit 1."""
    escaped = []
    for kind, cert in _tamper_inputs().items():
        doc = json.loads(dumps(cert.to_json()))
        rng = random.Random(kind)
        for i in range(100):
            bad, path = perturb(doc, rng)
            p = tmp_path / f"{kind}-{i}.json"
            p.write_text(json.dumps(bad))
            code = main(["verify", str(p)])
            if code != 1:
                escaped.append((kind, path, code))
        capsys.readouterr()
    assert not escaped, escaped[:5]


SUITE = """
set -e
L="{py} -m liouville"
$L construct spiffy --digits all2 --levels 4 --out x.json
$L construct spiffy --digits all2@6=0 --levels 4 --out y.json
$L construct jarnik --stages 4 --out u.json
$L certify selfpower --from u.json --stages 4 --out selfpower.json || true
$L certify selfpower --from x.json --levels 2,3 --out tuned.json || true
$L certify poly --poly "X*Y-X" --inputs x.json --inputs y.json --m 1,2,3 --out poly.json || true
$L certify pairwise --x x.json --y y.json --levels 2,3,4 --out pairwise.json || true
$L scan --xi invert:3/4 --tau 3 --bmax 60 --jobs 2 --out scan.csv
"""


def test_c14_determinism(tmp_path):
    """Two separate runs of the certificate suite write byte-identical files."""
    runs = []
    for seed in ("1", "2"):
        d = tmp_path / seed
        d.mkdir()
        env = dict(os.environ, PYTHONHASHSEED=seed)
        subprocess.run(["bash", "-c", SUITE.format(py=sys.executable)], cwd=d, env=env, check=True, capture_output=True)
        runs.append({p.name: p.read_bytes() for p in sorted(d.iterdir())})
    assert set(runs[0]) == {"x.json", "y.json", "u.json", "selfpower.json", "tuned.json", "poly.json", "pairwise.json", "scan.csv"}
    assert runs[0] == runs[1]
