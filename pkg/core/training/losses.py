"""
Loss terms.

- mlm_loss: 문장별로 마스킹된 토큰의 음의 로그우도를 더하고, 배치에서는 문장 평균을 냅니다.
- cross_lingual_penalty: 현재 모델과 기준 모델의 은닉 표현 사이 제곱 거리(내용 위치 전체)의 합.
- total_loss: mlm + λ · penalty
"""
from typing import Dict

import torch
import torch.nn.functional as F
from torch import nn

from core.model.encoder import ForwardOutput

from .exceptions import TrainingError
from .masking import IGNORE_INDEX, MaskedBatch


def _reduce(per_sentence: torch.Tensor, reduction: str) -> torch.Tensor:
    if reduction == 'mean':
        return per_sentence.mean()
    if reduction == 'sum':
        return per_sentence.sum()
    if reduction == 'none':
        return per_sentence
    raise ValueError(f"unknown reduction: {reduction}")


def token_nll(logits: torch.Tensor, labels: torch.Tensor) -> torch.Tensor:
    """-log softmax(logits)[label] per position; 0 where the label is ignored."""
    log_probs = F.log_softmax(logits, dim=-1)
    mask = labels != IGNORE_INDEX
    gathered = log_probs.gather(-1, labels.clamp(min=0).unsqueeze(-1)).squeeze(-1)
    return torch.where(mask, -gathered, torch.zeros_like(gathered))


def mlm_loss(output: ForwardOutput, batch: MaskedBatch, reduction: str = 'mean') -> torch.Tensor:
    if batch.num_masked == 0:
        raise TrainingError('no masked positions')
    per_sentence = token_nll(output.logits, batch.labels).sum(dim=1)
    return _reduce(per_sentence, reduction)


def representation_distances(
    current: ForwardOutput,
    base: ForwardOutput,
    batch: MaskedBatch,
    layer: int = -1,
) -> torch.Tensor:
    """Per-sentence Σ_j ‖f₀(x_j) − f(x_j)‖² over non-padding, non-special positions, shape (B,)."""
    current_hidden = current.layer(layer)
    base_hidden = base.layer(layer).detach()
    if current_hidden.shape != base_hidden.shape:
        raise TrainingError(
            'shape mismatch between current and base representations',
            details={'current': list(current_hidden.shape), 'base': list(base_hidden.shape)},
        )
    if current_hidden.shape[:2] != batch.content_mask.shape:
        raise TrainingError(
            'shape mismatch between representations and batch',
            details={'hidden': list(current_hidden.shape), 'batch': list(batch.content_mask.shape)},
        )
    squared = ((current_hidden - base_hidden) ** 2).sum(dim=-1)
    return (squared * batch.content_mask.to(squared.dtype)).sum(dim=1)


def cross_lingual_penalty(
    current: ForwardOutput,
    base: ForwardOutput,
    batch: MaskedBatch,
    layer: int = -1,
    reduction: str = 'mean',
) -> torch.Tensor:
    return _reduce(representation_distances(current, base, batch, layer), reduction)


def total_loss(mlm: torch.Tensor, penalty: torch.Tensor, reg_lambda: float) -> torch.Tensor:
    if reg_lambda == 0:
        return mlm
    return mlm + reg_lambda * penalty


def weight_penalty(model: nn.Module, reference: Dict[str, torch.Tensor]) -> torch.Tensor:
    """Σ ‖θ − θ₀‖² over every parameter."""
    terms = [((param - reference[name]) ** 2).sum() for name, param in model.named_parameters()]
    return torch.stack(terms).sum()
