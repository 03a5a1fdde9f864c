"""
어휘 집합에 없는 음절(novel syllable) 탐지.
"""
from collections import Counter
from typing import TYPE_CHECKING, List, NamedTuple, Set

from .syllables import is_hangul_syllable, normalize_text

if TYPE_CHECKING:
    from core.corpus.documents import Corpus
    from core.tokenizer.vocab import Vocabulary


class NovelSyllable(NamedTuple):
    syllable: str
    frequency: int


def vocabulary_syllables(vocab: 'Vocabulary') -> Set[str]:
    """Every Hangul syllable that appears inside some non-special vocabulary entry."""
    covered = set()
    for token in vocab.content_tokens():
        covered.update(ch for ch in token if is_hangul_syllable(ch))
    return covered


def find_novel_syllables(corpus: 'Corpus', vocab: 'Vocabulary') -> List[NovelSyllable]:
    """
    말뭉치에 등장하지만 어떤 어휘 항목에도 포함되지 않은 음절을 찾습니다.

    Returns:
        list: (음절, 빈도) 목록. 빈도 내림차순, 같은 빈도는 코드포인트 오름차순.
    """
    covered = vocabulary_syllables(vocab)
    counts = Counter()
    for sentence in corpus.iter_sentences():
        counts.update(
            ch for ch in normalize_text(sentence)
            if is_hangul_syllable(ch) and ch not in covered
        )

    ranked = sorted(counts.items(), key=lambda item: (-item[1], ord(item[0])))
    return [NovelSyllable(syllable, frequency) for syllable, frequency in ranked]
