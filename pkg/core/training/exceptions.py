"""
Custom exceptions for the training package.
"""
from core.error_handling.exceptions import HanlmBaseException


class TrainingError(HanlmBaseException):
    """Base exception for training errors."""

    def __init__(self, message, error_code="TRAINING_ERROR", details=None):
        super().__init__(message, error_code=error_code, details=details)


class MaskingError(TrainingError):
    """Raised when a sentence cannot be masked."""

    def __init__(self, message, details=None):
        super().__init__(message, error_code="MASKING_ERROR", details=details)


class TrainingDivergedError(TrainingError):
    """
    손실이 NaN/Inf가 되어 학습을 중단했을 때 발생합니다.

    last_checkpoint는 마지막으로 정상이었던 파라미터의 체크포인트 경로입니다.
    """

    def __init__(self, message, step=None, last_checkpoint=None, details=None):
        details = dict(details or {})
        details.update({'step': step, 'last_checkpoint': str(last_checkpoint) if last_checkpoint else None})
        super().__init__(message, error_code="TRAINING_DIVERGED", details=details)
        self.step = step
        self.last_checkpoint = last_checkpoint
