"""Machine-readable codes for domain errors, shared by the CLI and service."""

from __future__ import annotations

_ERROR_CODES = [
    ("EnumerationBudgetError", "enumeration-budget"),
    ("CriticalityError", "criticality-range"),
    ("NoCriticalCapitalError", "no-critical-capital"),
    ("CapitalRangeError", "capital-range"),
    ("InvalidOutcomeError", "invalid-pocket"),
    ("StoreError", "store"),
    ("SessionError", "session"),
    ("CapitalError", "capital"),
    ("EstimatorError", "estimator"),
    ("WheelError", "wheel"),
]


def error_code(exc: Exception) -> str:
    """Most specific known code for the exception's class hierarchy."""
    names = [cls.__name__ for cls in type(exc).__mro__]
    for name, code in _ERROR_CODES:
        if name in names:
            return code
    return "domain"
