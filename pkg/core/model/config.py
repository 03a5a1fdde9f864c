"""
Encoder hyperparameters.
"""
from dataclasses import asdict, dataclass, fields
from typing import Any, Dict, List

import torch

from core.error_handling.exceptions import ConfigurationError, ValidationError

DTYPE = torch.float64


@dataclass(frozen=True)
class ModelConfig:
    """
    기본값은 책상 규모(desk scale) 설정입니다. 공개된 전체 크기 설정은 full_size()를 사용하세요.
    """

    vocab_size: int = 2000
    hidden_size: int = 64
    num_layers: int = 2
    num_heads: int = 4
    intermediate_size: int = 128
    max_position: int = 128
    type_vocab_size: int = 2
    hidden_dropout_prob: float = 0.1
    attention_dropout_prob: float = 0.1
    layer_norm_eps: float = 1e-12
    initializer_range: float = 0.02

    def __post_init__(self):
        self.validate()

    def validate(self) -> None:
        errors: Dict[str, List[str]] = {}
        for name in ('vocab_size', 'hidden_size', 'num_layers', 'num_heads',
                     'intermediate_size', 'max_position', 'type_vocab_size'):
            value = getattr(self, name)
            if not isinstance(value, int) or isinstance(value, bool) or value < 1:
                errors[name] = [f'must be an integer >= 1, got {value!r}']
        if 'hidden_size' not in errors and 'num_heads' not in errors and self.hidden_size % self.num_heads:
            errors['num_heads'] = [f'hidden_size {self.hidden_size} is not divisible by num_heads {self.num_heads}']
        for name in ('hidden_dropout_prob', 'attention_dropout_prob'):
            value = getattr(self, name)
            if not 0 <= value < 1:
                errors[name] = [f'must be in [0, 1), got {value}']
        if self.layer_norm_eps <= 0:
            errors['layer_norm_eps'] = ['must be positive']
        if self.initializer_range < 0:
            errors['initializer_range'] = ['must be non-negative']
        if errors:
            raise ValidationError('Invalid model configuration', field_errors=errors)

    @property
    def head_size(self) -> int:
        return self.hidden_size // self.num_heads

    @classmethod
    def full_size(cls, vocab_size: int = 16424) -> 'ModelConfig':
        return cls(
            vocab_size=vocab_size,
            hidden_size=768,
            num_layers=12,
            num_heads=12,
            intermediate_size=3072,
            max_position=512,
        )

    @classmethod
    def desk_scale(cls, vocab_size: int = 2000) -> 'ModelConfig':
        return cls(vocab_size=vocab_size)

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @staticmethod
    def normalize_keys(data: Dict[str, Any]) -> Dict[str, Any]:
        data = dict(data)
        # 단일 dropout_prob는 두 비율 모두에 적용
        if 'dropout_prob' in data:
            rate = data.pop('dropout_prob')
            data.setdefault('hidden_dropout_prob', rate)
            data.setdefault('attention_dropout_prob', rate)
        return data

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'ModelConfig':
        data = cls.normalize_keys(data)
        known = {f.name for f in fields(cls)}
        for key in data:
            if key not in known:
                raise ConfigurationError(f"Unknown model config key: {key}", config_key=f"model.{key}")
        return cls(**data)

    def replace(self, **changes) -> 'ModelConfig':
        return self.from_dict({**self.to_dict(), **changes})
