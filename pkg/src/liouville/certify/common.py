"""Shared plumbing for certificate documents: canonical JSON, field readers,
check statuses and claim comparison.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from gmpy2 import mpq

from ..errors import MalformedCertificateError
from ..interval import DEFAULT_BUDGET, MPQ, IntervalReal, interval_log, parse_rat, rat_str
from ..magnitude import Magnitude, mag_compare, neg_log_ratio

SCHEMA_VERSION = 1
CERTIFICATE_TYPES = ("tuned", "selfpower", "poly", "pairwise")

PASS, FAIL, UNDECIDABLE = "pass", "fail", "undecidable"


def dumps(doc: dict) -> str:
    """Canonical serialization: sorted keys, fixed indentation, trailing newline."""
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=True) + "\n"


def loads(text: str) -> dict:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedCertificateError(f"not valid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise MalformedCertificateError("certificate must be a JSON object")
    if "schema_version" not in doc:
        raise MalformedCertificateError("missing schema_version")
    if doc["schema_version"] != SCHEMA_VERSION:
        raise MalformedCertificateError(f"unsupported schema_version {doc['schema_version']!r}")
    if doc.get("type") not in CERTIFICATE_TYPES:
        raise MalformedCertificateError(f"unknown certificate type {doc.get('type')!r}")
    return doc


def normalize(obj):
    """JSON round-trip, so claims compare the way they are stored."""
    return json.loads(json.dumps(obj, sort_keys=True))


class Reader:
    """Typed access to a JSON object that raises MalformedCertificateError."""

    def __init__(self, data, path: str = "$"):
        if not isinstance(data, dict):
            raise MalformedCertificateError(f"{path}: expected an object")
        self.data = data
        self.path = path

    def raw(self, key):
        if key not in self.data:
            raise MalformedCertificateError(f"{self.path}: missing field {key!r}")
        return self.data[key]

    def int(self, key) -> int:
        v = self.raw(key)
        try:
            if isinstance(v, bool):
                raise ValueError
            return int(v) if isinstance(v, int) else int(str(v), 10)
        except ValueError:
            raise MalformedCertificateError(f"{self.path}.{key}: not an integer") from None

    def rat(self, key) -> MPQ:
        v = self.raw(key)
        try:
            return parse_rat(str(v))
        except (ValueError, ZeroDivisionError):
            raise MalformedCertificateError(f"{self.path}.{key}: not a rational") from None

    def str(self, key) -> str:
        v = self.raw(key)
        if not isinstance(v, str):
            raise MalformedCertificateError(f"{self.path}.{key}: not a string")
        return v

    def obj(self, key) -> "Reader":
        return Reader(self.raw(key), f"{self.path}.{key}")

    def list(self, key) -> list:
        v = self.raw(key)
        if not isinstance(v, list):
            raise MalformedCertificateError(f"{self.path}.{key}: not a list")
        return v

    def int_list(self, key) -> list:
        out = []
        for i, v in enumerate(self.list(key)):
            try:
                out.append(int(str(v), 10))
            except ValueError:
                raise MalformedCertificateError(f"{self.path}.{key}[{i}]: not an integer") from None
        return out


def status_le(a: IntervalReal, b) -> str:
    """Certified status of ``a <= b``."""
    if not isinstance(b, IntervalReal):
        b = IntervalReal.exact(b, a.budget)
    if a.upper <= b.lower:
        return PASS
    if a.lower > b.upper:
        return FAIL
    return UNDECIDABLE


def enc_json(x: IntervalReal | None):
    return None if x is None else x.to_json()


def mag_max(mags, budget: int = DEFAULT_BUDGET) -> Magnitude:
    mags = list(mags)
    top = mags[0]
    for m in mags[1:]:
        if mag_compare(m, top, budget) > 0:
            top = m
    return top


def achieved_exponent(err: Magnitude, base: int, budget: int = DEFAULT_BUDGET):
    """``-log(err) / log(base)`` or None when undefined (base 1 or zero error)."""
    if base <= 1 or err.is_zero():
        return None
    return neg_log_ratio(err, interval_log(IntervalReal.exact(base, budget)), budget)


def bits_below(err: Magnitude) -> int:
    """Rough number of bits needed to resolve quantities of size ``err``."""
    if err.level == 0 and err.body > 0:
        q = err.body
        return max(0, q.denominator.bit_length() - q.numerator.bit_length()) + 2
    return 0


def diff_claims(stored, derived, path: str = "") -> list:
    """Paths where a stored claim differs from the recomputed one."""
    if isinstance(derived, dict):
        if not isinstance(stored, dict):
            return [path or "$"]
        out = []
        for k in sorted(set(derived) | set(stored)):
            if k not in derived or k not in stored:
                out.append(f"{path}.{k}" if path else k)
            else:
                out.extend(diff_claims(stored[k], derived[k], f"{path}.{k}" if path else k))
        return out
    if isinstance(derived, list):
        if not isinstance(stored, list) or len(stored) != len(derived):
            return [path]
        out = []
        for i, (s, d) in enumerate(zip(stored, derived)):
            out.extend(diff_claims(s, d, f"{path}[{i}]"))
        return out
    return [] if stored == derived else [path]


@dataclass
class Verdict:
    """Outcome of verifying one certificate document."""

    accepted: bool
    verdict: str  # "accepted", "rejected" or "vacuous"
    failures: list = field(default_factory=list)  # (stage label, check, detail)
    table: list = field(default_factory=list)  # (stage label, achieved exponent enclosure or None)

    @property
    def max_achieved(self):
        vals = [e for _, e in self.table if e is not None]
        if not vals:
            return None
        return max(vals, key=lambda e: e.lower)

    def first_failure(self) -> str:
        if not self.failures:
            return ""
        stage, check, detail = self.failures[0]
        return f"stage {stage}: {check}" + (f" ({detail})" if detail else "")


def max_exponent_json(exps) -> dict | None:
    vals = [e for e in exps if e is not None]
    if not vals:
        return None
    return max(vals, key=lambda e: e.lower).to_json()


def rat_json(q) -> str:
    return rat_str(mpq(q))


def check_constants(r: "Reader", expected: dict, failures: list) -> None:
    """Append a failure when the recorded constants block differs from ``expected``."""
    if r.raw("constants") != normalize(expected):
        failures.append(("input", "constants", "constants differ from recomputation"))
