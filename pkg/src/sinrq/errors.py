"""Error types shared by every engine and the command line front end."""


class SinrError(Exception):
    """Base class; ``code`` is the short status token written to CSV output."""

    code = "ERROR"


class Coincident(SinrError):
    code = "COINCIDENT"


class EmptySet(SinrError):
    code = "EMPTY_SET"


class TooSmall(SinrError):
    code = "TOO_SMALL"


class UnknownId(SinrError):
    code = "UNKNOWN_ID"


class DuplicateId(SinrError):
    code = "DUPLICATE_ID"


class AssumptionViolated(SinrError):
    code = "ASSUMPTION_VIOLATED"


class Malformed(SinrError):
    code = "MALFORMED"


class FamilyMismatch(SinrError):
    code = "FAMILY_MISMATCH"


class RangeViolation(SinrError):
    code = "RANGE_VIOLATION"


class RoundLimit(SinrError):
    code = "ROUND_LIMIT"


class ModeMismatch(SinrError):
    code = "MODE_MISMATCH"
