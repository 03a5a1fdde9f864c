"""
MLM masking and batch collation.
"""
from dataclasses import dataclass
from typing import List, Optional, Sequence, Union

import torch

from core.tokenizer.encoding import Encoding, TokenizedSentence
from core.tokenizer.vocab import SPECIAL_TOKENS, Vocabulary

from .exceptions import MaskingError

IGNORE_INDEX = -100


@dataclass
class MaskedBatch:
    """
    마스킹된 입력 묶음. 모든 텐서는 (B, L) 모양입니다.

    labels는 마스킹된 위치에서만 원래 토큰 id이고 나머지는 IGNORE_INDEX입니다.
    special_mask는 [CLS]/[SEP]와 패딩 위치에서 True입니다.
    """

    input_ids: torch.Tensor
    segment_ids: torch.Tensor
    attention_mask: torch.Tensor
    special_mask: torch.Tensor
    labels: torch.Tensor
    original_ids: torch.Tensor
    seed: Optional[int] = None

    @property
    def mask_positions(self) -> torch.Tensor:
        return self.labels != IGNORE_INDEX

    @property
    def targets(self) -> torch.Tensor:
        return self.labels[self.mask_positions]

    @property
    def content_mask(self) -> torch.Tensor:
        return self.attention_mask & ~self.special_mask

    @property
    def num_masked(self) -> int:
        return int(self.mask_positions.sum())

    @property
    def batch_size(self) -> int:
        return self.input_ids.shape[0]

    def __len__(self):
        return self.batch_size


def as_encoding(tokens: Union[Encoding, TokenizedSentence], vocab: Vocabulary) -> Encoding:
    """Wrap a bare tokenized sentence as ``[CLS] tokens [SEP]``."""
    if isinstance(tokens, Encoding):
        return tokens
    n = len(tokens.token_ids)
    return Encoding(
        input_ids=[vocab.cls_id] + list(tokens.token_ids) + [vocab.sep_id],
        segment_ids=[0] * (n + 2),
        special_mask=[True] + [False] * n + [True],
        word_boundaries=[False] + list(tokens.word_boundaries) + [False],
    )


def unmasked_batch(encoding: Encoding) -> MaskedBatch:
    ids = torch.tensor([encoding.input_ids], dtype=torch.long)
    return MaskedBatch(
        input_ids=ids,
        segment_ids=torch.tensor([encoding.segment_ids], dtype=torch.long),
        attention_mask=torch.ones_like(ids, dtype=torch.bool),
        special_mask=torch.tensor([encoding.special_mask], dtype=torch.bool),
        labels=torch.full_like(ids, IGNORE_INDEX),
        original_ids=ids.clone(),
    )


def mask_sentence(
    tokens: Union[Encoding, TokenizedSentence],
    config,
    generator: torch.Generator,
    vocab: Vocabulary,
    max_len: int = None,
) -> MaskedBatch:
    """
    내용 위치마다 독립적으로 mask_probability 확률로 선택해 마스킹합니다.

    아무 위치도 선택되지 않으면 하나를 강제로 선택합니다. [CLS]/[SEP]는 절대 마스킹하지 않습니다.
    결과는 generator 상태에 대해 결정적입니다.

    Args:
        config: mask_probability, masking_scheme 속성을 가진 설정 (TrainConfig 등)
        generator: torch.Generator
    """
    encoding = as_encoding(tokens, vocab)
    max_len = max_len or getattr(config, 'max_len', None)
    if max_len is not None and len(encoding) > max_len:
        raise MaskingError(
            f"sentence of {len(encoding)} tokens exceeds max_len {max_len}",
            details={'length': len(encoding)},
        )

    batch = unmasked_batch(encoding)
    content = torch.nonzero(~batch.special_mask[0]).flatten()
    if content.numel() == 0:
        raise MaskingError('sentence has no content positions')

    draws = torch.rand(content.numel(), generator=generator, dtype=torch.float64)
    selected = content[draws < config.mask_probability]
    if selected.numel() == 0:
        forced = torch.randint(content.numel(), (1,), generator=generator)
        selected = content[forced]

    input_ids = batch.input_ids[0]
    labels = batch.labels[0]
    labels[selected] = input_ids[selected]

    scheme = getattr(config, 'masking_scheme', 'mask')
    if scheme not in ('mask', 'bert'):
        raise MaskingError(f"unknown masking scheme: {scheme}", details={'masking_scheme': scheme})
    if scheme == 'bert':
        roll = torch.rand(selected.numel(), generator=generator, dtype=torch.float64)
        random_ids = torch.randint(len(SPECIAL_TOKENS), len(vocab), (selected.numel(),), generator=generator)
        to_mask = selected[roll < 0.8]
        to_random = (roll >= 0.8) & (roll < 0.9)
        input_ids[to_mask] = vocab.mask_id
        input_ids[selected[to_random]] = random_ids[to_random]
    else:
        input_ids[selected] = vocab.mask_id

    return batch


def collate(batches: Sequence[MaskedBatch], pad_id: int = 0) -> MaskedBatch:
    """Right-pad single or multi-row batches into one batch."""
    if not batches:
        raise MaskingError('cannot collate an empty list of batches')
    length = max(batch.input_ids.shape[1] for batch in batches)

    def pad(tensors: List[torch.Tensor], value) -> torch.Tensor:
        rows = sum(t.shape[0] for t in tensors)
        out = torch.full((rows, length), value, dtype=tensors[0].dtype)
        row = 0
        for t in tensors:
            out[row:row + t.shape[0], :t.shape[1]] = t
            row += t.shape[0]
        return out

    return MaskedBatch(
        input_ids=pad([b.input_ids for b in batches], pad_id),
        segment_ids=pad([b.segment_ids for b in batches], 0),
        attention_mask=pad([b.attention_mask for b in batches], False),
        special_mask=pad([b.special_mask for b in batches], True),
        labels=pad([b.labels for b in batches], IGNORE_INDEX),
        original_ids=pad([b.original_ids for b in batches], pad_id),
        seed=batches[0].seed,
    )


def mask_encodings(
    encodings: Sequence[Encoding],
    config,
    seed: int,
    vocab: Vocabulary,
    batch_size: int = 32,
) -> List[MaskedBatch]:
    """Mask every encoding from one seeded generator and collate in order."""
    generator = torch.Generator().manual_seed(seed)
    masked = [mask_sentence(encoding, config, generator, vocab, max_len=len(encoding)) for encoding in encodings]
    batches = []
    for start in range(0, len(masked), batch_size):
        batch = collate(masked[start:start + batch_size], pad_id=vocab.pad_id)
        batch.seed = seed
        batches.append(batch)
    return batches
