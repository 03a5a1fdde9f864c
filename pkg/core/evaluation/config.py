"""
Evaluation protocol settings.
"""
from dataclasses import asdict, dataclass, fields
from typing import Any, Dict, List, Optional, Tuple

from core.error_handling.exceptions import ConfigurationError, ValidationError
from core.training.config import MASKING_SCHEMES


@dataclass(frozen=True)
class EvalConfig:
    """
    반복(repeat)마다 seed 하나로 마스킹을 새로 뽑습니다. seeds를 생략하면 0..repeats-1입니다.

    per_sentence가 True이면 log-perplexity를 문장별 평균의 평균으로 계산합니다(기본은 마스킹 토큰별 평균).
    """

    repeats: int = 3
    mask_probability: float = 0.15
    seeds: Optional[Tuple[int, ...]] = None
    datasets: Tuple[str, ...] = ()
    per_sentence: bool = False
    batch_size: int = 32
    max_len: int = 128
    masking_scheme: str = 'mask'

    def __post_init__(self):
        if self.seeds is None:
            object.__setattr__(self, 'seeds', tuple(range(self.repeats)))
        else:
            object.__setattr__(self, 'seeds', tuple(int(s) for s in self.seeds))
        object.__setattr__(self, 'datasets', tuple(self.datasets))
        self.validate()

    def validate(self) -> None:
        if self.masking_scheme not in MASKING_SCHEMES:
            raise ConfigurationError(
                f"Unknown masking scheme: {self.masking_scheme} (choose from {', '.join(MASKING_SCHEMES)})",
                config_key='eval.masking_scheme',
            )
        errors: Dict[str, List[str]] = {}
        if self.repeats < 1:
            errors['repeats'] = ['must be >= 1']
        if len(self.seeds) != self.repeats:
            errors['seeds'] = [f'expected {self.repeats} seeds, got {len(self.seeds)}']
        if len(set(self.seeds)) != len(self.seeds):
            errors.setdefault('seeds', []).append('seeds must be distinct')
        if not 0 < self.mask_probability < 1:
            errors['mask_probability'] = ['must be in (0, 1)']
        if self.batch_size < 1:
            errors['batch_size'] = ['must be >= 1']
        if self.max_len < 3:
            errors['max_len'] = ['must be >= 3']
        if errors:
            raise ValidationError('Invalid evaluation configuration', field_errors=errors)

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data['seeds'] = list(self.seeds)
        data['datasets'] = list(self.datasets)
        return data

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'EvalConfig':
        data = dict(data)
        known = {f.name for f in fields(cls)}
        for key in data:
            if key not in known:
                raise ConfigurationError(f"Unknown eval config key: {key}", config_key=f"eval.{key}")
        if data.get('seeds') is not None and 'repeats' not in data:
            data['repeats'] = len(data['seeds'])
        return cls(**data)

    def replace(self, **changes) -> 'EvalConfig':
        data = {**self.to_dict(), **changes}
        if 'repeats' in changes and 'seeds' not in changes:
            data['seeds'] = None
        if changes.get('seeds') is not None and 'repeats' not in changes:
            data['repeats'] = len(changes['seeds'])
        return self.from_dict(data)
