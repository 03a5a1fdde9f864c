"""
WordPiece vocabulary construction.

점수 = pair_count / (left_count * right_count). 동점이면 빈도가 높은 쌍,
그 다음 병합 문자열의 사전순으로 가장 작은 쌍을 고릅니다.
"""
import logging
from collections import Counter, defaultdict
from fractions import Fraction
from typing import TYPE_CHECKING, Dict, List, Tuple

from core.error_handling.exceptions import ValidationError

from .encoding import pre_tokenize
from .exceptions import VocabularyError
from .vocab import CONTINUATION_PREFIX, SPECIAL_TOKENS, Vocabulary

if TYPE_CHECKING:
    from core.corpus.documents import Corpus

logger = logging.getLogger(__name__)

Pair = Tuple[str, str]


def _split_word(word: str) -> List[str]:
    return [word[0]] + [CONTINUATION_PREFIX + ch for ch in word[1:]]


def merged_string(left: str, right: str) -> str:
    """'a' + '##b' -> 'ab', '##a' + '##b' -> '##ab'."""
    return left + right[len(CONTINUATION_PREFIX):]


def count_words(corpus: 'Corpus') -> Counter:
    words = Counter()
    for sentence in corpus.iter_sentences():
        words.update(pre_tokenize(sentence))
    return words


class WordPieceTrainer:
    """
    어휘 집합 크기 목표에 도달하거나 min_frequency 이상인 쌍이 없을 때까지 병합합니다.

    최소 빈도 미만인 문자를 포함한 단어는 병합 통계에서 제외됩니다.
    """

    def __init__(self, target_size: int, min_frequency: int = 1):
        if min_frequency < 1:
            raise ValidationError('min_frequency must be at least 1', field_errors={'min_frequency': [str(min_frequency)]})
        if target_size < len(SPECIAL_TOKENS):
            raise VocabularyError('vocabulary budget too small', details={'target_size': target_size})
        self.target_size = target_size
        self.min_frequency = min_frequency

    def train(self, word_counts: Counter) -> Vocabulary:
        if not word_counts:
            raise VocabularyError('empty corpus')

        char_counts = Counter()
        for word, count in word_counts.items():
            for ch in word:
                char_counts[ch] += count
        kept_chars = {ch for ch, count in char_counts.items() if count >= self.min_frequency}

        # 사전순 정렬로 단어 순서를 고정
        words = [
            (_split_word(word), count)
            for word, count in sorted(word_counts.items())
            if all(ch in kept_chars for ch in word)
        ]
        alphabet = sorted({symbol for symbol_list, _ in words for symbol in symbol_list})

        forced = len(SPECIAL_TOKENS) + len(alphabet)
        if forced > self.target_size:
            raise VocabularyError(
                'vocabulary budget too small',
                details={'target_size': self.target_size, 'required': forced},
            )

        tokens = list(SPECIAL_TOKENS) + alphabet
        merges = self._merge(words, tokens)
        logger.info(
            f"Built vocabulary with {len(tokens)} tokens",
            extra={'alphabet': len(alphabet), 'merges': merges, 'target_size': self.target_size},
        )
        return Vocabulary(tokens)

    def _merge(self, words: List[Tuple[List[str], int]], tokens: List[str]) -> int:
        present = set(tokens)
        symbol_counts: Counter = Counter()
        pair_counts: Counter = Counter()
        where: Dict[Pair, set] = defaultdict(set)

        for index, (symbols, count) in enumerate(words):
            self._account(index, symbols, count, symbol_counts, pair_counts, where, sign=1)

        merges = 0
        while len(tokens) < self.target_size:
            best = self._best_pair(pair_counts, symbol_counts)
            if best is None:
                break
            left, right = best
            merged = merged_string(left, right)

            for index in sorted(where.pop(best, ())):
                symbols, count = words[index]
                if not any(a == left and b == right for a, b in zip(symbols, symbols[1:])):
                    continue
                self._account(index, symbols, count, symbol_counts, pair_counts, where, sign=-1)
                symbols = self._apply(symbols, left, right, merged)
                words[index] = (symbols, count)
                self._account(index, symbols, count, symbol_counts, pair_counts, where, sign=1)

            merges += 1
            if merged not in present:
                present.add(merged)
                tokens.append(merged)
        return merges

    def _best_pair(self, pair_counts: Counter, symbol_counts: Counter):
        best_key = None
        best = None
        for pair, count in pair_counts.items():
            if count < self.min_frequency:
                continue
            left, right = pair
            score = Fraction(count, symbol_counts[left] * symbol_counts[right])
            key = (-score, -count, merged_string(left, right))
            if best_key is None or key < best_key:
                best_key, best = key, pair
        return best

    @staticmethod
    def _apply(symbols: List[str], left: str, right: str, merged: str) -> List[str]:
        result = []
        i = 0
        while i < len(symbols):
            if i + 1 < len(symbols) and symbols[i] == left and symbols[i + 1] == right:
                result.append(merged)
                i += 2
            else:
                result.append(symbols[i])
                i += 1
        return result

    @staticmethod
    def _account(index, symbols, count, symbol_counts, pair_counts, where, sign):
        for symbol in symbols:
            symbol_counts[symbol] += sign * count
            if symbol_counts[symbol] <= 0:
                del symbol_counts[symbol]
        for pair in zip(symbols, symbols[1:]):
            pair_counts[pair] += sign * count
            if pair_counts[pair] <= 0:
                del pair_counts[pair]
            if sign > 0:
                where[pair].add(index)


def build_vocab(corpus: 'Corpus', target_size: int, min_frequency: int = 1) -> Vocabulary:
    """Build a WordPiece vocabulary from every sentence of ``corpus``."""
    return WordPieceTrainer(target_size, min_frequency).train(count_words(corpus))
