"""Exception taxonomy shared by all modules.

The CLI maps these to exit codes: invalid parameters -> 2, size/resource
limits -> 3, validation failures and verdict disagreements -> 1.
"""


class InvalidParametersError(ValueError):
    """Arguments violate a documented precondition."""


class SizeLimitError(RuntimeError):
    """Instance is structurally too large for the exact algorithms (r > 8)."""


class ResourceLimitError(RuntimeError):
    """A configurable resource cap (pairs, degree, term budget) was exceeded."""


class ValidationFailureError(RuntimeError):
    """A certificate failed independent re-validation; message names the step."""
