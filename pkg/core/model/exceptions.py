"""
Custom exceptions for the model package.
"""
from core.error_handling.exceptions import HanlmBaseException


class ModelInputError(HanlmBaseException):
    """Raised before any computation when a batch does not fit the model."""

    def __init__(self, message, details=None):
        super().__init__(message, error_code="MODEL_INPUT_ERROR", details=details)


class CheckpointError(HanlmBaseException):
    """체크포인트 파일을 읽거나 쓸 수 없을 때 발생합니다."""

    def __init__(self, message, path=None, details=None):
        details = dict(details or {})
        if path is not None:
            details['path'] = str(path)
        super().__init__(message, error_code="CHECKPOINT_ERROR", details=details)
        self.path = path


class VocabularyMismatchError(HanlmBaseException):
    """Raised when a checkpoint's vocab_size differs from the vocabulary file."""

    def __init__(self, checkpoint_size, vocab_size, details=None):
        message = (
            f"Checkpoint vocab_size {checkpoint_size} does not match "
            f"vocabulary file size {vocab_size}"
        )
        super().__init__(message, error_code="VOCABULARY_MISMATCH", details=details)
        self.checkpoint_size = checkpoint_size
        self.vocab_size = vocab_size
