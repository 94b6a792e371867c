"""Exception hierarchy shared by every module."""


class LiouvilleError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(LiouvilleError, ValueError):
    """Argument lies outside the domain of the operation."""


class IncomparableError(LiouvilleError):
    """Certified enclosures overlap; retry with a larger precision budget."""


class UnmaterializableError(LiouvilleError):
    """A quantity exceeds the materialization cap and cannot be made exact."""


class AmbiguousEnclosureError(LiouvilleError):
    """An enclosure is too wide to pin down the requested discrete data."""


class TrichotomyAmbiguousError(AmbiguousEnclosureError):
    """A level value cannot be placed relative to e^(-1/e) and 1."""


class PrecisionInsufficientError(LiouvilleError):
    """Some comparisons in a scan could not be decided.

    ``pairs`` lists the undecided ``(a, b)`` pairs.
    """

    def __init__(self, message, pairs=()):
        super().__init__(message)
        self.pairs = list(pairs)


class AnchorMismatchError(LiouvilleError):
    """Two inputs do not share the required anchor truncation."""


class MixedScheduleError(LiouvilleError):
    """Inputs that must share a schedule do not."""


class MalformedCertificateError(LiouvilleError):
    """A certificate document does not follow the schema."""
