"""
Continued-pretraining hyperparameters.
"""
from dataclasses import asdict, dataclass, fields
from typing import Any, Dict, List

from core.error_handling.exceptions import ConfigurationError, ValidationError

MASKING_SCHEMES = ('mask', 'bert')
REGULARIZERS = ('representation', 'weights')


@dataclass(frozen=True)
class TrainConfig:
    """
    reg_lambda는 정규화 항의 가중치(λ)입니다. 설정 파일에서는 ``lambda`` 키도 받습니다.

    masking_scheme: 'mask'는 선택된 위치를 모두 [MASK]로, 'bert'는 80/10/10 방식입니다.
    regularizer: 'representation'은 은닉 표현 거리, 'weights'는 파라미터 거리입니다.
    """

    reg_lambda: float = 0.0
    mask_probability: float = 0.15
    learning_rate: float = 5e-5
    batch_size: int = 16
    epochs: int = 20
    seed: int = 0
    masking_scheme: str = 'mask'
    regularizer: str = 'representation'
    representation_layer: int = -1
    warmup_ratio: float = 0.1
    weight_decay: float = 0.0
    max_grad_norm: float = 1.0
    max_len: int = 128
    log_interval: int = 1
    checkpoint_every: int = 1
    log_wallclock: bool = False

    def __post_init__(self):
        self.validate()

    def validate(self) -> None:
        errors: Dict[str, List[str]] = {}
        if self.reg_lambda < 0:
            errors['reg_lambda'] = ['must be >= 0']
        if not 0 < self.mask_probability < 1:
            errors['mask_probability'] = ['must be in (0, 1)']
        if self.learning_rate <= 0:
            errors['learning_rate'] = ['must be positive']
        for name in ('batch_size', 'log_interval', 'checkpoint_every'):
            if getattr(self, name) < 1:
                errors[name] = ['must be >= 1']
        if self.epochs < 0:
            errors['epochs'] = ['must be >= 0']
        if self.max_len < 3:
            errors['max_len'] = ['must be >= 3']
        if self.masking_scheme not in MASKING_SCHEMES:
            errors['masking_scheme'] = [f"must be one of {', '.join(MASKING_SCHEMES)}"]
        if self.regularizer not in REGULARIZERS:
            errors['regularizer'] = [f"must be one of {', '.join(REGULARIZERS)}"]
        if not 0 <= self.warmup_ratio < 1:
            errors['warmup_ratio'] = ['must be in [0, 1)']
        if self.max_grad_norm < 0 or self.weight_decay < 0:
            errors['max_grad_norm'] = ['max_grad_norm and weight_decay must be >= 0']
        if errors:
            raise ValidationError('Invalid training configuration', field_errors=errors)

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @staticmethod
    def normalize_keys(data: Dict[str, Any]) -> Dict[str, Any]:
        data = dict(data)
        if 'lambda' in data:
            data.setdefault('reg_lambda', data.pop('lambda'))
        return data

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'TrainConfig':
        data = cls.normalize_keys(data)
        known = {f.name for f in fields(cls)}
        for key in data:
            if key not in known:
                raise ConfigurationError(f"Unknown train config key: {key}", config_key=f"train.{key}")
        return cls(**data)

    def replace(self, **changes) -> 'TrainConfig':
        return self.from_dict({**self.to_dict(), **changes})
