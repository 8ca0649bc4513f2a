"""Exact toolkit for block diagonal matching fields on Grassmannians.

Builds the weight matrices of (a, l)-block diagonal matching fields, computes
the induced matching field both by brute-force minimisation and in closed
form, decides whether the maximal minors are a SAGBI basis for the Pluecker
algebra under the induced order, and emits machine-checkable certificates.
"""

__version__ = "0.1.0"

from .errors import (
    InvalidParametersError,
    ResourceLimitError,
    SizeLimitError,
    ValidationFailureError,
)

__all__ = [
    "InvalidParametersError",
    "SizeLimitError",
    "ResourceLimitError",
    "ValidationFailureError",
    "__version__",
]
