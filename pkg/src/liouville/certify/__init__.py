"""Certificate builders and the verifier."""

from .common import FAIL, PASS, SCHEMA_VERSION, UNDECIDABLE, Verdict, dumps, loads
from .jarnik import SelfPowerCertificate, SelfPowerStage, build_selfpower_certificate, exp_of_jarnik_certificate
from .pairwise import PairwiseCertificate, PairwiseStage, build_pairwise_certificate, pairwise_power_certificate
from .poly import Polynomial, PolynomialClosureCertificate, parse_polynomial, poly_closure_certificate
from .tuned import (
    TunedCertificate,
    TunedStage,
    TuneResult,
    build_tuned_certificate,
    build_tuned_parameters,
    build_tuned_stage,
    selfpower_error_chain,
    tune_digits_search,
    verify_tuned_certificate,
)
from .verify import verify_certificate

__all__ = [
    "FAIL",
    "PASS",
    "SCHEMA_VERSION",
    "UNDECIDABLE",
    "PairwiseCertificate",
    "PairwiseStage",
    "Polynomial",
    "PolynomialClosureCertificate",
    "SelfPowerCertificate",
    "SelfPowerStage",
    "TuneResult",
    "TunedCertificate",
    "TunedStage",
    "Verdict",
    "build_pairwise_certificate",
    "build_selfpower_certificate",
    "build_tuned_certificate",
    "build_tuned_parameters",
    "build_tuned_stage",
    "dumps",
    "exp_of_jarnik_certificate",
    "loads",
    "pairwise_power_certificate",
    "parse_polynomial",
    "poly_closure_certificate",
    "selfpower_error_chain",
    "tune_digits_search",
    "verify_certificate",
    "verify_tuned_certificate",
]
