"""Liouville-type numbers, their self-powers and exact approximation certificates."""

__version__ = "0.1.0"

from .errors import (
    AmbiguousEnclosureError,
    AnchorMismatchError,
    DomainError,
    IncomparableError,
    LiouvilleError,
    MalformedCertificateError,
    MixedScheduleError,
    PrecisionInsufficientError,
    TrichotomyAmbiguousError,
    UnmaterializableError,
)
from .interval import IntervalReal, interval_exp, interval_log
from .magnitude import Magnitude, mag_compare, mag_from_power, mag_leq_power, materialization_cap
from .schedule import (
    DigitSequence,
    ExponentSchedule,
    SpiffyNumber,
    epsilon_strong_check,
    liouville_exponent_lower,
    prop11_threshold,
    tail_bound,
    truncate,
)
from .diophantine import (
    ContinuedFractionExpansion,
    JarnikTarget,
    cf_of_rational,
    cf_of_real,
    dirichlet_approx,
    exp_taylor_rational,
    jarnik_generate,
    lcm_upto,
)
from .selfpower import (
    derivative_bounds,
    hausdorff_series_partial,
    invert_self_power,
    invert_xlogx,
    non_liouville_scan,
    phi,
    self_power,
)
from .certify import (
    build_pairwise_certificate,
    build_selfpower_certificate,
    build_tuned_certificate,
    build_tuned_parameters,
    exp_of_jarnik_certificate,
    pairwise_power_certificate,
    poly_closure_certificate,
    verify_certificate,
)
