"""Exception types shared across the package.

Every error carries a short machine-parsable ``code`` used by the command
line front end as a stderr prefix, so scripted callers can branch on the
failure class without parsing prose.
"""


class ZetaDiffError(Exception):
    """Base class for all package errors."""

    code = "error"


class DomainError(ZetaDiffError):
    """An argument lies outside the mathematical domain of an operation."""

    code = "domain_error"


class ParseError(ZetaDiffError):
    """A text input could not be parsed."""

    code = "parse_error"


class ValidationError(ZetaDiffError):
    """Parsed data violates a structural requirement."""

    code = "validation_error"


class FormatError(ZetaDiffError):
    """A binary input has an impossible shape."""

    code = "format_error"


class RangeError(ZetaDiffError):
    """An index or frequency falls outside the representable range."""

    code = "range_error"


class GeometryError(ZetaDiffError):
    """Two objects that must share bin geometry do not."""

    code = "geometry_error"


class DegenerateFitError(ZetaDiffError):
    """A least-squares problem has no usable solution."""

    code = "degenerate_fit_error"


class UsageError(ZetaDiffError):
    """Bad command line or configuration input."""

    code = "usage_error"
