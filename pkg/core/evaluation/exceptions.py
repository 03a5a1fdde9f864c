"""
Custom exceptions for the evaluation package.
"""
from core.error_handling.exceptions import HanlmBaseException


class EvaluationError(HanlmBaseException):
    """Base exception for evaluation errors."""

    def __init__(self, message, error_code="EVALUATION_ERROR", details=None):
        super().__init__(message, error_code=error_code, details=details)


class ReportError(EvaluationError):
    """Raised when a report cannot be rendered."""

    def __init__(self, message, details=None):
        super().__init__(message, error_code="REPORT_ERROR", details=details)
