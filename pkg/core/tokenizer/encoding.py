"""
Greedy longest-match-first WordPiece tokenization and sentence-pair encoding.
"""
import unicodedata
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

from core.hangul.syllables import normalize_text

from .vocab import CONTINUATION_PREFIX, Vocabulary


def is_punctuation(ch: str) -> bool:
    """ASCII symbols and every Unicode ``P*`` category count as punctuation."""
    cp = ord(ch)
    if 33 <= cp <= 47 or 58 <= cp <= 64 or 91 <= cp <= 96 or 123 <= cp <= 126:
        return True
    return unicodedata.category(ch).startswith('P')


def pre_tokenize(text: str) -> List[str]:
    """Split on whitespace, then split every punctuation character off as its own word."""
    words = []
    for chunk in normalize_text(text).split():
        current = []
        for ch in chunk:
            if is_punctuation(ch):
                if current:
                    words.append(''.join(current))
                    current = []
                words.append(ch)
            else:
                current.append(ch)
        if current:
            words.append(''.join(current))
    return words


@dataclass
class TokenizedSentence:
    """token_ids와 각 위치가 원문 단어의 시작인지 나타내는 표시."""

    token_ids: List[int] = field(default_factory=list)
    word_boundaries: List[bool] = field(default_factory=list)

    def __len__(self):
        return len(self.token_ids)


@dataclass
class Encoding:
    """[CLS] first [SEP] (second [SEP]) with segment ids and a special-token mask."""

    input_ids: List[int]
    segment_ids: List[int]
    special_mask: List[bool]
    word_boundaries: List[bool]

    def __len__(self):
        return len(self.input_ids)

    @property
    def content_positions(self) -> List[int]:
        return [i for i, special in enumerate(self.special_mask) if not special]


class WordPieceTokenizer:
    """
    어휘 집합 위의 탐욕적 최장 일치 토크나이저.

    단어의 어느 부분이라도 일치하지 않으면 단어 전체가 하나의 [UNK]가 됩니다.
    """

    def __init__(self, vocab: Vocabulary, max_input_chars_per_word: int = 100):
        self.vocab = vocab
        self.max_input_chars_per_word = max_input_chars_per_word

    def tokenize_word(self, word: str) -> List[str]:
        if len(word) > self.max_input_chars_per_word:
            return [self.vocab.tokens[self.vocab.unk_id]]

        pieces = []
        start = 0
        while start < len(word):
            end = len(word)
            match = None
            while start < end:
                candidate = word[start:end]
                if start > 0:
                    candidate = CONTINUATION_PREFIX + candidate
                if candidate in self.vocab:
                    match = candidate
                    break
                end -= 1
            if match is None:
                return [self.vocab.tokens[self.vocab.unk_id]]
            pieces.append(match)
            start = end
        return pieces

    def tokenize(self, text: str) -> TokenizedSentence:
        result = TokenizedSentence()
        for word in pre_tokenize(text):
            for position, piece in enumerate(self.tokenize_word(word)):
                result.token_ids.append(self.vocab.token_to_id(piece))
                result.word_boundaries.append(position == 0)
        return result

    def unk_rate(self, sentences: Sequence[str]) -> float:
        """Share of pre-tokenized words that come out as a whole-word [UNK]."""
        unk = self.vocab.tokens[self.vocab.unk_id]
        words = [word for sentence in sentences for word in pre_tokenize(sentence)]
        if not words:
            return 0.0
        return sum(1 for word in words if self.tokenize_word(word) == [unk]) / len(words)

    def encode_pair(self, first: str, second: Optional[str], max_len: int) -> Encoding:
        return encode_pair(first, second, self.vocab, max_len, tokenizer=self)


def tokenize(text: str, vocab: Vocabulary) -> TokenizedSentence:
    return WordPieceTokenizer(vocab).tokenize(text)


def _truncate_pair(first: TokenizedSentence, second: TokenizedSentence, budget: int) -> None:
    # 긴 쪽의 끝에서부터 하나씩 제거 (같으면 두 번째 문장부터)
    while len(first) + len(second) > budget:
        target = first if len(first) > len(second) else second
        target.token_ids.pop()
        target.word_boundaries.pop()


def encode_pair(
    first: str,
    second: Optional[str],
    vocab: Vocabulary,
    max_len: int,
    tokenizer: WordPieceTokenizer = None,
) -> Encoding:
    """
    [CLS] first [SEP] second [SEP] 형태로 인코딩합니다.

    second가 None이면 단일 문장 입력 [CLS] first [SEP] (모든 segment 0)이 되고,
    빈 문자열이면 빈 두 번째 구간을 가진 쌍 입력이 됩니다.
    """
    if max_len < 3:
        raise ValueError(f"max_len must be at least 3, got {max_len}")

    tokenizer = tokenizer or WordPieceTokenizer(vocab)
    head = tokenizer.tokenize(first)
    tail = tokenizer.tokenize(second) if second is not None else None

    if tail is None:
        _truncate_pair(head, TokenizedSentence(), max_len - 2)
    else:
        _truncate_pair(head, tail, max_len - 3)

    # [UNK]은 원문 단어를 대신하므로 내용 위치로 취급합니다
    input_ids = [vocab.cls_id] + head.token_ids + [vocab.sep_id]
    segment_ids = [0] * len(input_ids)
    special_mask = [True] + [False] * len(head) + [True]
    boundaries = [False] + head.word_boundaries + [False]
    if tail is not None:
        input_ids += tail.token_ids + [vocab.sep_id]
        segment_ids += [1] * (len(tail) + 1)
        special_mask += [False] * len(tail) + [True]
        boundaries += tail.word_boundaries + [False]

    return Encoding(input_ids, segment_ids, special_mask, boundaries)


def encode_texts(texts: Sequence[str], vocab: Vocabulary, max_len: int) -> List[Encoding]:
    tokenizer = WordPieceTokenizer(vocab)
    return [encode_pair(text, None, vocab, max_len, tokenizer=tokenizer) for text in texts]
