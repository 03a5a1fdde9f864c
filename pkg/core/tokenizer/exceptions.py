"""
Custom exceptions for the tokenizer package.
"""
from core.error_handling.exceptions import HanlmBaseException


class VocabularyError(HanlmBaseException):
    """Raised when a vocabulary cannot be built or loaded."""

    def __init__(self, message, details=None):
        super().__init__(message, error_code="VOCABULARY_ERROR", details=details)
