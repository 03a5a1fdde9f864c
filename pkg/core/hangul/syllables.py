"""
Precomposed Hangul syllable algebra.

완성형 음절 = HANGUL_BASE + (초성 * 21 + 중성) * 28 + 종성
"""
import unicodedata
from typing import NamedTuple, Optional, Tuple

HANGUL_BASE = 0xAC00
HANGUL_LAST = 0xD7A3

NUM_INITIALS = 19
NUM_MEDIALS = 21
NUM_FINALS = 28
SYLLABLE_COUNT = NUM_INITIALS * NUM_MEDIALS * NUM_FINALS

INITIAL_JAMO = [
    'ㄱ', 'ㄲ', 'ㄴ', 'ㄷ', 'ㄸ', 'ㄹ', 'ㅁ', 'ㅂ', 'ㅃ', 'ㅅ',
    'ㅆ', 'ㅇ', 'ㅈ', 'ㅉ', 'ㅊ', 'ㅋ', 'ㅌ', 'ㅍ', 'ㅎ',
]
MEDIAL_JAMO = [
    'ㅏ', 'ㅐ', 'ㅑ', 'ㅒ', 'ㅓ', 'ㅔ', 'ㅕ', 'ㅖ', 'ㅗ', 'ㅘ', 'ㅙ',
    'ㅚ', 'ㅛ', 'ㅜ', 'ㅝ', 'ㅞ', 'ㅟ', 'ㅠ', 'ㅡ', 'ㅢ', 'ㅣ',
]
FINAL_JAMO = [
    '', 'ㄱ', 'ㄲ', 'ㄳ', 'ㄴ', 'ㄵ', 'ㄶ', 'ㄷ', 'ㄹ', 'ㄺ',
    'ㄻ', 'ㄼ', 'ㄽ', 'ㄾ', 'ㄿ', 'ㅀ', 'ㅁ', 'ㅂ', 'ㅄ', 'ㅅ',
    'ㅆ', 'ㅇ', 'ㅈ', 'ㅊ', 'ㅋ', 'ㅌ', 'ㅍ', 'ㅎ',
]


class Syllable(NamedTuple):
    """A precomposed syllable and its component indices (final 0 = none)."""

    codepoint: int
    initial: int
    medial: int
    final: int

    @property
    def char(self) -> str:
        return chr(self.codepoint)


# decompose()가 완성형 음절이 아닌 입력에 대해 반환하는 표식
NOT_HANGUL = None


def is_hangul_syllable(ch: str) -> bool:
    return len(ch) == 1 and HANGUL_BASE <= ord(ch) <= HANGUL_LAST


def decompose(ch: str) -> Optional[Syllable]:
    """
    완성형 음절을 초성/중성/종성 인덱스로 분해합니다.

    완성형 음절 영역 밖의 문자는 NOT_HANGUL(None)을 반환합니다.
    """
    if not is_hangul_syllable(ch):
        return NOT_HANGUL

    offset = ord(ch) - HANGUL_BASE
    initial, rest = divmod(offset, NUM_MEDIALS * NUM_FINALS)
    medial, final = divmod(rest, NUM_FINALS)
    return Syllable(ord(ch), initial, medial, final)


def recompose(initial: int, medial: int, final: int = 0) -> str:
    """Inverse of :func:`decompose`."""
    if not 0 <= initial < NUM_INITIALS:
        raise ValueError(f"initial index out of range: {initial}")
    if not 0 <= medial < NUM_MEDIALS:
        raise ValueError(f"medial index out of range: {medial}")
    if not 0 <= final < NUM_FINALS:
        raise ValueError(f"final index out of range: {final}")
    return chr(HANGUL_BASE + (initial * NUM_MEDIALS + medial) * NUM_FINALS + final)


def jamo_of(ch: str) -> Optional[Tuple[str, str, str]]:
    """Compatibility jamo letters of a syllable, e.g. '돐' -> ('ㄷ', 'ㅗ', 'ㄽ')."""
    syllable = decompose(ch)
    if syllable is NOT_HANGUL:
        return None
    return (
        INITIAL_JAMO[syllable.initial],
        MEDIAL_JAMO[syllable.medial],
        FINAL_JAMO[syllable.final],
    )


def normalize_text(text: str) -> str:
    """Compose conjoining-jamo sequences into precomposed syllables (NFC)."""
    return unicodedata.normalize('NFC', text)
