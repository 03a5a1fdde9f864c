"""
Transformer 인코더와 MLM 출력층, 체크포인트 입출력.
"""
from .config import DTYPE, ModelConfig
from .encoder import (
    ForwardOutput,
    MaskedLanguageModel,
    init_params,
    build_model,
    forward,
    compute_gradients,
    count_parameters,
    parameter_fingerprint,
)
from .checkpoint import save_checkpoint, load_checkpoint, read_metadata, check_vocab_compat
from .exceptions import CheckpointError, ModelInputError, VocabularyMismatchError

__all__ = [
    'DTYPE',
    'ModelConfig',
    'ForwardOutput',
    'MaskedLanguageModel',
    'init_params',
    'build_model',
    'forward',
    'compute_gradients',
    'count_parameters',
    'parameter_fingerprint',
    'save_checkpoint',
    'load_checkpoint',
    'read_metadata',
    'check_vocab_compat',
    'CheckpointError',
    'ModelInputError',
    'VocabularyMismatchError',
]
