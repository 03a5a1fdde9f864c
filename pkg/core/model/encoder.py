"""
Bidirectional transformer encoder with a masked-LM head.

입력 임베딩 = 토큰 + 위치 + 세그먼트 임베딩. 각 층은 post-LN 구조입니다:
x = LN(x + Dropout(Attention(x))), x = LN(x + Dropout(FFN(x))).
MLM 출력층은 토큰 임베딩 행렬을 공유하고 토큰별 bias를 더합니다.
"""
import hashlib
import logging
import math
from dataclasses import dataclass
from typing import Callable, Dict, Optional, Tuple

import torch
import torch.nn.functional as F
from safetensors.torch import save as save_tensors
from torch import nn

from .config import DTYPE, ModelConfig
from .exceptions import ModelInputError

logger = logging.getLogger(__name__)


@dataclass
class ForwardOutput:
    """hidden: (B, L, H), logits: (B, L, M), hidden_states: embeddings output then one entry per layer."""

    hidden: torch.Tensor
    logits: torch.Tensor
    hidden_states: Tuple[torch.Tensor, ...] = ()

    def layer(self, index: int = -1) -> torch.Tensor:
        return self.hidden_states[index] if self.hidden_states else self.hidden


class SelfAttention(nn.Module):
    def __init__(self, config: ModelConfig):
        super().__init__()
        self.num_heads = config.num_heads
        self.head_size = config.head_size
        self.query = nn.Linear(config.hidden_size, config.hidden_size)
        self.key = nn.Linear(config.hidden_size, config.hidden_size)
        self.value = nn.Linear(config.hidden_size, config.hidden_size)
        self.output = nn.Linear(config.hidden_size, config.hidden_size)
        self.dropout = nn.Dropout(config.attention_dropout_prob)

    def _split_heads(self, x: torch.Tensor) -> torch.Tensor:
        batch, length, _ = x.shape
        return x.view(batch, length, self.num_heads, self.head_size).transpose(1, 2)

    def forward(self, x: torch.Tensor, key_padding: torch.Tensor) -> torch.Tensor:
        q = self._split_heads(self.query(x))
        k = self._split_heads(self.key(x))
        v = self._split_heads(self.value(x))

        scores = q @ k.transpose(-1, -2) / math.sqrt(self.head_size)
        # key_padding: (B, L), True = 패딩
        scores = scores.masked_fill(key_padding[:, None, None, :], float('-inf'))
        probs = self.dropout(torch.softmax(scores, dim=-1))

        context = (probs @ v).transpose(1, 2).reshape(x.shape)
        return self.output(context)


class EncoderLayer(nn.Module):
    def __init__(self, config: ModelConfig):
        super().__init__()
        self.attention = SelfAttention(config)
        self.attention_norm = nn.LayerNorm(config.hidden_size, eps=config.layer_norm_eps)
        self.intermediate = nn.Linear(config.hidden_size, config.intermediate_size)
        self.output = nn.Linear(config.intermediate_size, config.hidden_size)
        self.output_norm = nn.LayerNorm(config.hidden_size, eps=config.layer_norm_eps)
        self.dropout = nn.Dropout(config.hidden_dropout_prob)

    def forward(self, x: torch.Tensor, key_padding: torch.Tensor) -> torch.Tensor:
        x = self.attention_norm(x + self.dropout(self.attention(x, key_padding)))
        feed_forward = self.output(F.gelu(self.intermediate(x)))
        return self.output_norm(x + self.dropout(feed_forward))


class MaskedLanguageModel(nn.Module):
    """
    Masked-LM encoder.

    forward()는 계산 전에 입력 범위를 검사하고 ModelInputError를 발생시킵니다.
    """

    def __init__(self, config: ModelConfig):
        super().__init__()
        self.config = config
        self.token_embeddings = nn.Embedding(config.vocab_size, config.hidden_size)
        self.position_embeddings = nn.Embedding(config.max_position, config.hidden_size)
        self.segment_embeddings = nn.Embedding(config.type_vocab_size, config.hidden_size)
        self.embedding_dropout = nn.Dropout(config.hidden_dropout_prob)
        self.layers = nn.ModuleList(EncoderLayer(config) for _ in range(config.num_layers))
        self.mlm_bias = nn.Parameter(torch.zeros(config.vocab_size))

    def check_inputs(self, input_ids: torch.Tensor, segment_ids: torch.Tensor, attention_mask: torch.Tensor) -> None:
        if input_ids.dim() != 2:
            raise ModelInputError(f"input_ids must be 2-D (batch, length), got shape {tuple(input_ids.shape)}")
        if segment_ids.shape != input_ids.shape or attention_mask.shape != input_ids.shape:
            raise ModelInputError(
                'segment_ids and attention_mask must match input_ids',
                details={'input_ids': list(input_ids.shape), 'segment_ids': list(segment_ids.shape),
                         'attention_mask': list(attention_mask.shape)},
            )
        length = input_ids.shape[1]
        if length == 0:
            raise ModelInputError('empty input sequence')
        if length > self.config.max_position:
            raise ModelInputError(
                f"sequence length {length} exceeds max_position {self.config.max_position}",
                details={'length': length},
            )
        if input_ids.numel() and (input_ids.min() < 0 or input_ids.max() >= self.config.vocab_size):
            raise ModelInputError(
                f"token id out of range [0, {self.config.vocab_size})",
                details={'min': int(input_ids.min()), 'max': int(input_ids.max())},
            )
        if segment_ids.numel() and (segment_ids.min() < 0 or segment_ids.max() >= self.config.type_vocab_size):
            raise ModelInputError(f"segment id out of range [0, {self.config.type_vocab_size})")
        if not bool(attention_mask.bool().any(dim=1).all()):
            raise ModelInputError('every sequence needs at least one non-padding position')

    def forward(
        self,
        input_ids: torch.Tensor,
        segment_ids: Optional[torch.Tensor] = None,
        attention_mask: Optional[torch.Tensor] = None,
    ) -> ForwardOutput:
        if segment_ids is None:
            segment_ids = torch.zeros_like(input_ids)
        if attention_mask is None:
            attention_mask = torch.ones_like(input_ids, dtype=torch.bool)
        self.check_inputs(input_ids, segment_ids, attention_mask)

        positions = torch.arange(input_ids.shape[1], device=input_ids.device)
        x = (
            self.token_embeddings(input_ids)
            + self.position_embeddings(positions)[None, :, :]
            + self.segment_embeddings(segment_ids)
        )
        x = self.embedding_dropout(x)

        key_padding = ~attention_mask.bool()
        hidden_states = [x]
        for layer in self.layers:
            x = layer(x, key_padding)
            hidden_states.append(x)

        logits = x @ self.token_embeddings.weight.t() + self.mlm_bias
        return ForwardOutput(hidden=x, logits=logits, hidden_states=tuple(hidden_states))


def init_params(config: ModelConfig, seed: int) -> MaskedLanguageModel:
    """
    N(0, initializer_range) 초기화. LayerNorm은 gain 1, bias 0, 나머지 bias는 0입니다.

    같은 seed는 비트 단위로 같은 파라미터를 만듭니다.
    """
    generator = torch.Generator().manual_seed(seed)
    model = MaskedLanguageModel(config).to(DTYPE)
    std = config.initializer_range

    with torch.no_grad():
        for name, module in model.named_modules():
            if isinstance(module, (nn.Linear, nn.Embedding)):
                if std > 0:
                    module.weight.normal_(0.0, std, generator=generator)
                else:
                    module.weight.zero_()
                if getattr(module, 'bias', None) is not None:
                    module.bias.zero_()
            elif isinstance(module, nn.LayerNorm):
                module.weight.fill_(1.0)
                module.bias.zero_()
        model.mlm_bias.zero_()

    model.eval()
    logger.debug('Initialized model parameters', extra={'seed': seed, 'parameters': count_parameters(model)})
    return model


build_model = init_params


def forward(model: MaskedLanguageModel, batch, mode: str = 'eval') -> ForwardOutput:
    """Run ``model`` on a masked batch in ``train`` or ``eval`` mode."""
    if mode not in ('train', 'eval'):
        raise ModelInputError(f"mode must be 'train' or 'eval', got {mode!r}")
    model.train(mode == 'train')
    return model(batch.input_ids, batch.segment_ids, batch.attention_mask)


def compute_gradients(model: MaskedLanguageModel, loss_fn: Callable[[MaskedLanguageModel], torch.Tensor]) -> Dict[str, torch.Tensor]:
    """
    loss_fn(model)이 반환한 스칼라의 모든 파라미터에 대한 기울기.

    손실에 기여하지 않는 파라미터의 기울기는 0 텐서입니다.
    """
    model.zero_grad(set_to_none=True)
    loss = loss_fn(model)
    if loss.requires_grad:
        loss.backward()
    return {
        name: (param.grad.detach().clone() if param.grad is not None else torch.zeros_like(param))
        for name, param in model.named_parameters()
    }


def count_parameters(model: nn.Module) -> int:
    return sum(p.numel() for p in model.parameters())


def parameter_fingerprint(model: nn.Module) -> str:
    """sha256 of the serialized state dict."""
    tensors = {name: tensor.detach().contiguous() for name, tensor in model.state_dict().items()}
    return hashlib.sha256(save_tensors(tensors)).hexdigest()
