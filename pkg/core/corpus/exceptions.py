"""
Custom exceptions for corpus ingestion and extraction.
"""
from core.error_handling.exceptions import HanlmBaseException


class CorpusError(HanlmBaseException):
    """Base exception for corpus errors."""

    def __init__(self, message, error_code="CORPUS_ERROR", details=None):
        super().__init__(message, error_code=error_code, details=details)


class CorpusEncodingError(CorpusError):
    """Raised when an input file is not valid UTF-8."""

    def __init__(self, message, path=None, details=None):
        details = dict(details or {})
        if path is not None:
            details['path'] = str(path)
        super().__init__(message, error_code="CORPUS_ENCODING_ERROR", details=details)
        self.path = path


class ExtractionError(CorpusError):
    """기사 HTML에서 필요한 필드를 찾지 못했을 때 발생합니다."""

    def __init__(self, message, field=None, details=None):
        details = dict(details or {})
        if field:
            details['field'] = field
        super().__init__(message, error_code="EXTRACTION_ERROR", details=details)
        self.field = field
