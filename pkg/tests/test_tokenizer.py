"""
토크나이저 테스트: 어휘 파일, 탐욕적 최장 일치, 문장 쌍 인코딩.
"""
from functools import lru_cache

import pytest
from django.test import SimpleTestCase
from hypothesis import given, settings, strategies as st

from core.tokenizer import (
    SPECIAL_TOKENS,
    UNK,
    Vocabulary,
    WordPieceTokenizer,
    encode_pair,
    pre_tokenize,
    tokenize,
)
from core.tokenizer.exceptions import VocabularyError

ALPHABET = '가나다라마바'
ORACLE_VOCAB = Vocabulary(
    SPECIAL_TOKENS
    + tuple(ALPHABET)
    + tuple(f"##{ch}" for ch in ALPHABET)
    + ('가나', '가나다', '##나다', '##라마', '다라', '##바가', '마바')
)


def segmentable(word: str, vocab: Vocabulary) -> bool:
    """동적 계획법으로 어휘 조각들로 단어를 나눌 수 있는지 판정"""

    @lru_cache(maxsize=None)
    def from_position(start: int) -> bool:
        if start == len(word):
            return True
        for end in range(start + 1, len(word) + 1):
            piece = word[start:end] if start == 0 else '##' + word[start:end]
            if piece in vocab and from_position(end):
                return True
        return False

    return from_position(0)


class TestVocabulary(SimpleTestCase):
    """어휘 집합 테스트"""

    def test_special_tokens_come_first(self):
        vocab = Vocabulary(SPECIAL_TOKENS + ('가',))
        self.assertEqual((vocab.pad_id, vocab.unk_id, vocab.cls_id, vocab.sep_id, vocab.mask_id), (0, 1, 2, 3, 4))
        self.assertEqual(vocab.special_ids, frozenset(range(5)))

    def test_rejects_missing_specials_and_duplicates(self):
        with self.assertRaises(VocabularyError):
            Vocabulary(('가', '나'))
        with self.assertRaises(VocabularyError):
            Vocabulary(SPECIAL_TOKENS + ('가', '가'))
        with self.assertRaises(VocabularyError):
            Vocabulary(SPECIAL_TOKENS + ('##',))

    def test_save_and_load(self):
        import tempfile
        from pathlib import Path

        with tempfile.TemporaryDirectory() as directory:
            path = ORACLE_VOCAB.save(Path(directory) / 'vocab.txt')
            self.assertEqual(Vocabulary.load(path), ORACLE_VOCAB)
            self.assertTrue(path.read_bytes().endswith(b'\n'))

    def test_detokenize_joins_continuations(self):
        ids = [ORACLE_VOCAB.token_to_id(t) for t in ('가나다', '##라마', '바')]
        self.assertEqual(ORACLE_VOCAB.detokenize(ids), '가나다라마 바')


class TestGreedyTokenization(SimpleTestCase):
    """탐욕적 최장 일치 테스트"""

    def setUp(self):
        self.tokenizer = WordPieceTokenizer(ORACLE_VOCAB)

    def test_longest_match_first(self):
        self.assertEqual(self.tokenizer.tokenize_word('가나다라마'), ['가나다', '##라마'])
        self.assertEqual(self.tokenizer.tokenize_word('다라바가'), ['다라', '##바가'])

    def test_unknown_character_makes_whole_word_unk(self):
        self.assertEqual(self.tokenizer.tokenize_word('가나하다'), [UNK])

    def test_overlong_word_is_unk(self):
        tokenizer = WordPieceTokenizer(ORACLE_VOCAB, max_input_chars_per_word=3)
        self.assertEqual(tokenizer.tokenize_word('가나다라'), [UNK])

    def test_novel_syllable_examples(self):
        """어휘에 돎/췰이 없으면 에돎도, 도이췰란드는 단어 전체가 [UNK]"""
        vocab = Vocabulary(SPECIAL_TOKENS + ('에', '도', '##도', '##이', '##란', '##드', '란', '드'))
        tokenizer = WordPieceTokenizer(vocab)
        self.assertEqual(tokenizer.tokenize_word('에돎도'), [UNK])
        self.assertEqual(tokenizer.tokenize_word('도이췰란드'), [UNK])
        self.assertEqual(tokenizer.tokenize_word('도이'), ['도', '##이'])
        sentence = tokenize('도이췰란드 에도', vocab)
        self.assertEqual(vocab.convert_ids_to_tokens(sentence.token_ids), [UNK, '에', '##도'])
        self.assertEqual(sentence.word_boundaries, [True, True, False])

    def test_unk_rate_counts_words(self):
        rate = self.tokenizer.unk_rate(['가나 하하', '다라'])
        self.assertAlmostEqual(rate, 1 / 3)

    def test_pre_tokenize_splits_punctuation(self):
        self.assertEqual(pre_tokenize('가나, 다라!  마바.'), ['가나', ',', '다라', '!', '마바', '.'])


class TestEncodePair(SimpleTestCase):
    """문장 쌍 인코딩 테스트"""

    def test_single_sentence(self):
        encoding = encode_pair('가나다 라', None, ORACLE_VOCAB, max_len=16)
        tokens = ORACLE_VOCAB.convert_ids_to_tokens(encoding.input_ids)
        self.assertEqual(tokens, ['[CLS]', '가나다', '라', '[SEP]'])
        self.assertEqual(encoding.segment_ids, [0, 0, 0, 0])
        self.assertEqual(encoding.special_mask, [True, False, False, True])
        self.assertEqual(encoding.content_positions, [1, 2])

    def test_pair_segments(self):
        encoding = encode_pair('가', '나', ORACLE_VOCAB, max_len=16)
        tokens = ORACLE_VOCAB.convert_ids_to_tokens(encoding.input_ids)
        self.assertEqual(tokens, ['[CLS]', '가', '[SEP]', '나', '[SEP]'])
        self.assertEqual(encoding.segment_ids, [0, 0, 0, 1, 1])

    def test_truncation_removes_from_longer_side(self):
        encoding = encode_pair('가 나 다 라 마', '바', ORACLE_VOCAB, max_len=6)
        self.assertEqual(len(encoding), 6)
        tokens = ORACLE_VOCAB.convert_ids_to_tokens(encoding.input_ids)
        self.assertEqual(tokens, ['[CLS]', '가', '나', '[SEP]', '바', '[SEP]'])

    def test_max_len_too_small(self):
        with self.assertRaises(ValueError):
            encode_pair('가', None, ORACLE_VOCAB, max_len=2)

    def test_unk_is_content(self):
        encoding = encode_pair('하하', None, ORACLE_VOCAB, max_len=8)
        self.assertEqual(encoding.input_ids[1], ORACLE_VOCAB.unk_id)
        self.assertFalse(encoding.special_mask[1])


@settings(max_examples=1000)
@given(st.text(alphabet=ALPHABET + '하', min_size=1, max_size=12))
def test_greedy_agrees_with_segmentation_oracle(word):
    pieces = WordPieceTokenizer(ORACLE_VOCAB).tokenize_word(word)
    if segmentable(word, ORACLE_VOCAB):
        assert pieces != [UNK]
        assert ''.join(p[2:] if i else p for i, p in enumerate(pieces)) == word
        assert all(p in ORACLE_VOCAB for p in pieces)
    else:
        assert pieces == [UNK]


@given(st.lists(st.text(alphabet=ALPHABET, min_size=1, max_size=6), min_size=1, max_size=5))
def test_encode_never_exceeds_max_len(words):
    encoding = encode_pair(' '.join(words), ' '.join(reversed(words)), ORACLE_VOCAB, max_len=7)
    assert len(encoding) <= 7
    assert encoding.input_ids[0] == ORACLE_VOCAB.cls_id
    assert encoding.input_ids[-1] == ORACLE_VOCAB.sep_id


@pytest.mark.parametrize('text', ['', '   '])
def test_empty_text_tokenizes_to_nothing(text):
    assert len(tokenize(text, ORACLE_VOCAB)) == 0
