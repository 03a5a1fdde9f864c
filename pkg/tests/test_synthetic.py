"""
합성 말뭉치 생성기 테스트.
"""
import pytest
from django.test import SimpleTestCase

from core.corpus import SourceTag
from core.corpus.synthetic import (
    LANGUAGE_A,
    LANGUAGE_B,
    LANGUAGE_C,
    LANGUAGES,
    OBJECTS,
    SyntheticGrammar,
    _verb_index,
    synthesize_all,
    synthesize_corpus,
)
from core.error_handling.exceptions import ValidationError
from core.hangul import find_novel_syllables
from core.tokenizer import build_vocab


class TestSyntheticCorpus(SimpleTestCase):
    """합성 언어 생성 테스트"""

    def test_same_seed_same_corpus(self):
        self.assertEqual(synthesize_corpus(LANGUAGE_A, 10, 3, seed=4), synthesize_corpus(LANGUAGE_A, 10, 3, seed=4))

    def test_seed_changes_sample_only(self):
        first = synthesize_corpus(LANGUAGE_A, 10, 3, seed=1)
        second = synthesize_corpus(LANGUAGE_A, 10, 3, seed=2)
        self.assertEqual(first.ids(), second.ids())
        self.assertNotEqual(first.sentences(), second.sentences())

    def test_shape_and_tags(self):
        corpora = synthesize_all(documents=4, sentences_per_document=2, seed=0)
        self.assertEqual(set(corpora), set(LANGUAGES))
        self.assertEqual(corpora[LANGUAGE_B].sentence_count, 8)
        self.assertEqual({d.source_tag for d in corpora[LANGUAGE_C]}, {SourceTag.NEWYEAR})
        self.assertTrue(all(s.endswith('.') for s in corpora[LANGUAGE_A].iter_sentences()))

    def test_dependency_structures_differ(self):
        for obj in range(len(OBJECTS)):
            self.assertNotEqual(_verb_index(obj, LANGUAGE_A), _verb_index(obj, LANGUAGE_B))
        self.assertEqual(_verb_index(3, LANGUAGE_A), _verb_index(3, LANGUAGE_C))

    def test_language_b_respells_and_uses_novel_syllables(self):
        corpus_a = synthesize_corpus(LANGUAGE_A, 100, 5, seed=0)
        corpus_b = synthesize_corpus(LANGUAGE_B, 100, 5, seed=0)
        text_a = ' '.join(corpus_a.sentences())
        text_b = ' '.join(corpus_b.sentences())

        self.assertNotIn('로동자', text_a)
        self.assertNotIn('노동자', text_b)
        self.assertIn('돐', text_b)
        novel = find_novel_syllables(corpus_b, build_vocab(corpus_a, 600))
        self.assertIn('돐', [entry.syllable for entry in novel])

    def test_language_b_opens_with_fixed_time_and_place(self):
        for sentence in SyntheticGrammar(LANGUAGE_B, seed=0).sentences(50):
            self.assertRegex(sentence, r'^(창립 \d+돐을 맞아 )?오늘 평양에서 ')
        openings = set()
        for sentence in SyntheticGrammar(LANGUAGE_A, seed=0).sentences(200):
            words = sentence.split()
            if words[0] == '창립':
                words = words[3:]
            openings.add(tuple(words[:2]))
        self.assertGreater(len(openings), 10)

    def test_new_year_sentences_have_year_prefix(self):
        grammar = SyntheticGrammar(LANGUAGE_C, seed=0)
        for sentence in grammar.sentences(5):
            self.assertRegex(sentence, r'^\d{4}년 새해에 ')


@pytest.mark.parametrize('documents,sentences', [(0, 5), (5, 0)])
def test_rejects_non_positive_sizes(documents, sentences):
    with pytest.raises(ValidationError):
        synthesize_corpus(LANGUAGE_A, documents, sentences)


def test_unknown_language():
    with pytest.raises(ValidationError):
        SyntheticGrammar('klingon')
