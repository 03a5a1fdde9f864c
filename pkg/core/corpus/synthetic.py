"""
Seeded synthetic corpora.

- language_a: 기준 언어. 주어가 목적어를, 목적어가 서술어를 결정하고,
  때와 장소는 고르게 섞입니다.
- language_b: 같은 어휘를 다른 의존 관계로 배치하고, 두음 표기를 바꾸며(노동자 -> 로동자),
  어휘 집합에 없는 음절(돐)과 붙여 쓴 부사를 포함합니다. 문장은 늘 같은 머리말
  ("오늘 평양에서")로 시작합니다.
- language_c: language_a의 의존 관계와 표기를 따르는 신년사 형식의 보류 텍스트.

의존 관계는 코드에 고정된 순열이므로 seed와 무관하게 같은 언어를 만듭니다.
seed는 표본만 바꿉니다.
"""
import logging
import random
from typing import Dict, List

from core.error_handling.exceptions import ValidationError
from core.hangul.syllables import decompose

from .documents import Corpus, Document, SourceTag

logger = logging.getLogger(__name__)

LANGUAGE_A = 'language_a'
LANGUAGE_B = 'language_b'
LANGUAGE_C = 'language_c'
LANGUAGES = (LANGUAGE_A, LANGUAGE_B, LANGUAGE_C)

SOURCE_TAGS = {
    LANGUAGE_A: SourceTag.OTHER,
    LANGUAGE_B: SourceTag.RODONG,
    LANGUAGE_C: SourceTag.NEWYEAR,
}

SUBJECTS = [
    '노동자', '여성', '농민', '학생', '청년', '과학자',
    '교원', '노인', '기자', '어린이', '의사', '예술인',
]
OBJECTS = [
    '역사', '이론', '기술', '노력', '양심', '내일',
    '예절', '경제', '문화', '평화', '연합', '농업',
]
VERBS = [
    '배운다', '지킨다', '만든다', '이야기한다', '연구한다', '발전시킨다',
    '생각한다', '기억한다', '보여준다', '이용한다', '준비한다', '존중한다',
]
TIMES = ['오늘', '어제', '아침에', '저녁에', '요즘']
PLACES = ['평양에서', '서울에서', '학교에서', '공장에서', '농장에서']
ANNIVERSARIES = (60, 70)

# language_b의 모든 문장 머리
LANGUAGE_B_OPENING = ['오늘', '평양에서']

# 두음 표기 차이 (language_a -> language_b)
RESPELLINGS = {
    '노동자': '로동자',
    '여성': '녀성',
    '노인': '로인',
    '역사': '력사',
    '이론': '리론',
    '노력': '로력',
    '양심': '량심',
    '내일': '래일',
    '예절': '례절',
    '연합': '련합',
    '이용한다': '리용한다',
}


def _object_index(subject: int, language: str) -> int:
    if language == LANGUAGE_B:
        return (subject + 5) % len(OBJECTS)
    return subject


def _verb_index(obj: int, language: str) -> int:
    # 두 순열은 어떤 목적어에서도 같은 서술어를 고르지 않습니다
    if language == LANGUAGE_B:
        return (obj * 7 + 3) % len(VERBS)
    return (obj * 5) % len(VERBS)


def has_final_consonant(word: str) -> bool:
    syllable = decompose(word[-1])
    return syllable is not None and syllable.final != 0


def topic_particle(word: str) -> str:
    return '은' if has_final_consonant(word) else '는'


def object_particle(word: str) -> str:
    return '을' if has_final_consonant(word) else '를'


class SyntheticGrammar:
    """
    세 언어의 문장 생성기.

    Args:
        language: LANGUAGES 중 하나
        seed: 표본 추출용 seed
    """

    def __init__(self, language: str, seed: int = 0):
        if language not in LANGUAGES:
            raise ValidationError(f"Unknown synthetic language: {language}", field_errors={'language': [language]})
        self.language = language
        self.rng = random.Random(f"{seed}:{language}")

    def spell(self, word: str) -> str:
        if self.language == LANGUAGE_B:
            return RESPELLINGS.get(word, word)
        return word

    def core_clause(self) -> List[str]:
        s = self.rng.randrange(len(SUBJECTS))
        o = _object_index(s, self.language)
        v = _verb_index(o, self.language)
        subject = self.spell(SUBJECTS[s])
        obj = self.spell(OBJECTS[o])
        return [subject + topic_particle(subject), obj + object_particle(obj), self.spell(VERBS[v])]

    def sentence(self) -> str:
        words = self.core_clause()
        if self.language == LANGUAGE_C:
            year = self.rng.randrange(1990, 2030)
            words = [f'{year}년', '새해에'] + words[:2] + ['더욱'] + words[2:]
            return ' '.join(words) + '.'

        rng = self.rng
        if self.language == LANGUAGE_B:
            opening = list(LANGUAGE_B_OPENING)
        else:
            opening = [rng.choice(TIMES), rng.choice(PLACES)]
        if rng.random() < 0.2:
            unit = '돐을' if self.language == LANGUAGE_B else '주년을'
            opening[:0] = ['창립', f'{rng.choice(ANNIVERSARIES)}{unit}', '맞아']
        if rng.random() < 0.2:
            manner = ['더잘'] if self.language == LANGUAGE_B else ['더', '잘']
            words[-1:-1] = manner
        return ' '.join(opening + words) + '.'

    def sentences(self, count: int) -> List[str]:
        return [self.sentence() for _ in range(count)]


def synthesize_corpus(
    language: str,
    documents: int = 200,
    sentences_per_document: int = 5,
    seed: int = 0,
) -> Corpus:
    if documents < 1 or sentences_per_document < 1:
        raise ValidationError(
            'documents and sentences_per_document must be positive',
            field_errors={'documents': [str(documents)], 'sentences_per_document': [str(sentences_per_document)]},
        )
    grammar = SyntheticGrammar(language, seed)
    corpus = Corpus(tuple(
        Document(
            id=f"{language}-{index:05d}",
            sentences=tuple(grammar.sentences(sentences_per_document)),
            title=f"{language} {index}",
            date=f"2020-{grammar.rng.randrange(1, 13):02d}-{grammar.rng.randrange(1, 29):02d}",
            source_tag=SOURCE_TAGS[language],
        )
        for index in range(documents)
    ))
    logger.info(
        f"Synthesized {language}",
        extra={'documents': len(corpus), 'sentences': corpus.sentence_count, 'seed': seed},
    )
    return corpus


def synthesize_all(documents: int = 200, sentences_per_document: int = 5, seed: int = 0) -> Dict[str, Corpus]:
    return {
        language: synthesize_corpus(language, documents, sentences_per_document, seed)
        for language in LANGUAGES
    }
