"""
Deterministic document-level train/validation splits.
"""
import hashlib
import logging
from typing import Tuple

from core.error_handling.exceptions import ValidationError

from .documents import Corpus

logger = logging.getLogger(__name__)


def split_score(document_id: str, seed: int) -> float:
    """sha256(seed:id)의 앞 8바이트를 [0, 1) 구간 값으로 변환합니다."""
    digest = hashlib.sha256(f"{seed}:{document_id}".encode('utf-8')).digest()
    return int.from_bytes(digest[:8], 'big') / 2 ** 64


def split_corpus(corpus: Corpus, train_fraction: float, seed: int) -> Tuple[Corpus, Corpus]:
    if not 0 < train_fraction < 1:
        raise ValidationError(
            f"train_fraction must be in (0, 1), got {train_fraction}",
            field_errors={'train_fraction': [str(train_fraction)]},
        )

    train, valid = [], []
    for document in corpus.documents:
        (train if split_score(document.id, seed) < train_fraction else valid).append(document)

    logger.info(
        f"Split {len(corpus)} documents into {len(train)} train / {len(valid)} valid",
        extra={'seed': seed, 'train_fraction': train_fraction},
    )
    return Corpus(tuple(train)), Corpus(tuple(valid))
