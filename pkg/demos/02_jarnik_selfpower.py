"""
Self-powers of a Jarnik-type target
===================================

A continued fraction with occasional huge partial quotients is very well
approximated by the convergent just before each one.  Feeding those
convergents through a Taylor approximant of exp gives rational
approximations to u**u, with a certified error budget per stage.
"""

import json

from liouville.certify import build_selfpower_certificate, dumps, loads, verify_certificate
from liouville.diophantine import jarnik_generate

u = jarnik_generate("2^(2^n)", filler=2, stages=4)
print("quotients:", u.cf.quotients)
for s in u.stages:
    print(f"stage {s.n}: forced a_{s.index} = {s.forced_quotient}, B has {s.B.bit_length()} bits,"
          f" exponent {float(s.achieved_exponent.mid):.4f}")

cert = build_selfpower_certificate(u, None, "n^2")
for s in cert.stages:
    terms = {k: f"{float(v.value):.2e}" for k, v in s.error_terms.items()}
    print(s.n, terms, f"achieved {float(s.achieved_exponent.mid):.4f}")

# the certificate is plain JSON; the verifier recomputes every claim
text = dumps(cert.to_json())
print(verify_certificate(loads(text)).verdict)

doc = json.loads(text)
doc["stages"][0]["P"] = str(int(doc["stages"][0]["P"]) + 1)
print(verify_certificate(doc).first_failure())
