"""
MLM 마스킹, 손실 함수, 계속 사전학습(continued pretraining) 루프.
"""
from .config import TrainConfig, MASKING_SCHEMES, REGULARIZERS
from .masking import IGNORE_INDEX, MaskedBatch, mask_sentence, collate, mask_encodings, unmasked_batch
from .losses import mlm_loss, cross_lingual_penalty, representation_distances, total_loss, weight_penalty, token_nll
from .trainer import (
    BaseSnapshot,
    TrainLog,
    TrainLogRecord,
    TrainResult,
    TrainerCallback,
    ContinuedPretrainer,
    train,
)
from .callbacks import ValidationCurveCallback
from .exceptions import TrainingError, TrainingDivergedError, MaskingError

__all__ = [
    'TrainConfig',
    'MASKING_SCHEMES',
    'REGULARIZERS',
    'IGNORE_INDEX',
    'MaskedBatch',
    'mask_sentence',
    'collate',
    'mask_encodings',
    'unmasked_batch',
    'mlm_loss',
    'cross_lingual_penalty',
    'representation_distances',
    'total_loss',
    'weight_penalty',
    'token_nll',
    'BaseSnapshot',
    'TrainLog',
    'TrainLogRecord',
    'TrainResult',
    'TrainerCallback',
    'ContinuedPretrainer',
    'train',
    'ValidationCurveCallback',
    'TrainingError',
    'TrainingDivergedError',
    'MaskingError',
]
