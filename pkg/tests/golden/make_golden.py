"""Regenerate the frozen reference values.

The Jarnik and pairwise-error sections are computed here from first
principles (``fractions`` and ``mpmath``) without touching the package.
The ``certified`` sections freeze package output so later runs can detect
drift.  Run from the repository root:

    python3 tests/golden/make_golden.py
"""

import json
from fractions import Fraction
from math import factorial
from pathlib import Path

import mpmath

HERE = Path(__file__).parent
mpmath.mp.dps = 400


def convergents(a0, quotients):
    p0, q0, p1, q1 = 1, 0, a0, 1
    out = [(p1, q1)]
    for a in quotients:
        p0, q0, p1, q1 = p1, q1, a * p1 + p0, a * q1 + q0
        out.append((p1, q1))
    return out


def jarnik_oracle(stages=4, filler=2):
    qs = [1]
    forced_at = []
    for n in range(1, stages + 1):
        qs += [filler, 2 ** (2**n)]
        forced_at.append(len(qs))
    qs.append(filler)
    conv = convergents(-1, qs)
    rows = []
    for n, k in enumerate(forced_at, start=1):
        A, B = conv[k - 1]
        q_next = conv[k][1]
        err = Fraction(1, B * q_next)
        expo = -mpmath.log(mpmath.mpf(err.numerator) / err.denominator) / mpmath.log(B)
        rows.append(
            {
                "n": n,
                "A": str(A),
                "B": str(B),
                "q_next": str(q_next),
                "error_upper": f"{err.numerator}/{err.denominator}",
                "achieved_exponent": mpmath.nstr(expo, 30),
            }
        )
    return {"forced": "2^(2^n)", "filler": filler, "integer_part": -1, "quotients": [str(q) for q in qs], "stages": rows}


def spiffy_value(digits, depth):
    """Exact truncation at ``depth`` of sum d_n 3^-(n+1)! for a digit function."""
    return sum(Fraction(digits(n), 3 ** factorial(n + 1)) for n in range(1, depth + 1))


def pairwise_oracle(flip, levels, P_Q):
    """True error |x^y - P/Q| using truncations far below the error scale."""
    depth = levels[-1] + 2
    x = spiffy_value(lambda n: 2, depth)
    y = spiffy_value(lambda n: 0 if n == flip else 2, depth)
    mpmath.mp.dps = 4 * 3 * factorial(depth + 1) // 10 + 200
    fx = mpmath.mpf(x.numerator) / x.denominator
    fy = mpmath.mpf(y.numerator) / y.denominator
    val = mpmath.exp(fy * mpmath.log(fx))
    out = []
    for P, Q in P_Q:
        err = abs(val - mpmath.mpf(P) / Q)
        out.append(mpmath.nstr(-mpmath.log(err) / mpmath.log(Q), 20))
    mpmath.mp.dps = 400
    return out


def main():
    from liouville.certify import build_pairwise_certificate, build_selfpower_certificate
    from liouville.diophantine import jarnik_generate
    from liouville.schedule import DigitSequence, ExponentSchedule, SpiffyNumber

    ref = {"jarnik": jarnik_oracle()}
    u = jarnik_generate("2^(2^n)", 2, 4)
    sp = build_selfpower_certificate(u, None, "n^2")
    ref["selfpower_certified"] = [s.achieved_exponent.to_json() for s in sp.stages]

    fact = ExponentSchedule.factorial(1)
    pw = []
    for flip, levels in ((5, (2, 3, 4)), (6, (3, 4, 5))):
        x = SpiffyNumber(fact, DigitSequence.all2())
        y = SpiffyNumber(fact, DigitSequence.all2().with_digit(flip, 0))
        cert = build_pairwise_certificate(x, y, levels)
        pq = [(int(s.claims["P"]), s.Q) for s in cert.stages]
        pw.append(
            {
                "flip": flip,
                "levels": list(levels),
                "certified": [s.achieved_exponent.to_json() for s in cert.stages],
                "true_exponent": pairwise_oracle(flip, levels, pq),
            }
        )
    ref["pairwise"] = pw
    (HERE / "reference.json").write_text(json.dumps(ref, indent=2, sort_keys=True) + "\n")


if __name__ == "__main__":
    main()
