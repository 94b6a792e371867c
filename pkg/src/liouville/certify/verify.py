"""Dispatching verifier for every certificate type."""

from __future__ import annotations

from ..errors import MalformedCertificateError
from .common import CERTIFICATE_TYPES, SCHEMA_VERSION, Verdict, loads, normalize
from .jarnik import verify_selfpower
from .pairwise import verify_pairwise
from .poly import verify_poly
from .tuned import verify_tuned

_VERIFIERS = {
    "selfpower": verify_selfpower,
    "poly": verify_poly,
    "pairwise": verify_pairwise,
    "tuned": verify_tuned,
}


def verify_certificate(cert, budget: int | None = None) -> Verdict:
    """Re-derive every claim of ``cert`` and compare.

    ``cert`` may be a builder object, a parsed JSON dict or the JSON text.
    The budget recorded in the document is used unless ``budget`` is given.
    Raises MalformedCertificateError for structural problems;
    IncomparableError propagates so the caller can retry at a higher budget.
    """
    if isinstance(cert, str):
        doc = loads(cert)
    elif isinstance(cert, dict):
        doc = cert
    elif hasattr(cert, "to_json"):
        doc = normalize(cert.to_json())
    else:
        raise MalformedCertificateError(f"cannot verify a {type(cert).__name__}")
    if doc.get("schema_version") != SCHEMA_VERSION:
        raise MalformedCertificateError(f"unsupported schema_version {doc.get('schema_version')!r}")
    kind = doc.get("type")
    if kind not in CERTIFICATE_TYPES:
        raise MalformedCertificateError(f"unknown certificate type {kind!r}")
    return _VERIFIERS[kind](doc, budget)
