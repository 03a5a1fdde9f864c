"""
한글 음절 연산 패키지.

완성형 음절의 분해/조합, 어휘 집합에 없는 음절 탐지,
그리고 음절 치환표(syllable map) 적용 기능을 제공합니다.
"""
from .syllables import (
    HANGUL_BASE,
    HANGUL_LAST,
    SYLLABLE_COUNT,
    Syllable,
    NOT_HANGUL,
    decompose,
    recompose,
    is_hangul_syllable,
    jamo_of,
    normalize_text,
)
from .novel import NovelSyllable, find_novel_syllables
from .mapping import SyllableMap, SyllableMapEntry, apply_map, apply_map_to_corpus

__all__ = [
    'HANGUL_BASE',
    'HANGUL_LAST',
    'SYLLABLE_COUNT',
    'Syllable',
    'NOT_HANGUL',
    'decompose',
    'recompose',
    'is_hangul_syllable',
    'jamo_of',
    'normalize_text',
    'NovelSyllable',
    'find_novel_syllables',
    'SyllableMap',
    'SyllableMapEntry',
    'apply_map',
    'apply_map_to_corpus',
]
