"""
DPRK -> ROK syllable mapping tables.

Map file format (UTF-8): one entry per line, ``source<TAB>replacement<TAB>note``;
lines starting with ``#`` and blank lines are ignored.
"""
import logging
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import TYPE_CHECKING, Dict, Iterable, List, Union

from core.error_handling.exceptions import ValidationError, ResourceNotFoundError

from .syllables import is_hangul_syllable

if TYPE_CHECKING:
    from core.corpus.documents import Corpus

logger = logging.getLogger(__name__)

DEFAULT_MAP_PATH = Path(__file__).resolve().parent / 'data' / 'default_syllable_map.tsv'


@dataclass(frozen=True)
class SyllableMapEntry:
    source: str
    replacement: str
    note: str = ''


@dataclass(frozen=True)
class SyllableMap:
    """
    음절 치환표.

    불변 조건: 원본 음절은 유일하고, 치환 문자열은 원본과 다르며,
    어떤 치환 문자열도 원본 음절을 포함하지 않습니다(한 번 적용 = 여러 번 적용).
    """

    entries: tuple = field(default_factory=tuple)

    def __post_init__(self):
        self.validate()

    def validate(self) -> None:
        errors: Dict[str, List[str]] = {}
        sources = set()
        for entry in self.entries:
            problems = []
            if not is_hangul_syllable(entry.source):
                problems.append('source must be a single precomposed Hangul syllable')
            if not entry.replacement:
                problems.append('replacement is empty')
            elif not all(is_hangul_syllable(ch) for ch in entry.replacement):
                problems.append('replacement must consist of precomposed Hangul syllables')
            if entry.source == entry.replacement:
                problems.append('source equals its replacement')
            if entry.source in sources:
                problems.append('duplicate source')
            sources.add(entry.source)
            if problems:
                errors.setdefault(entry.source, []).extend(problems)

        for entry in self.entries:
            clashes = sorted(ch for ch in set(entry.replacement) if ch in sources)
            if clashes:
                errors.setdefault(entry.source, []).append(
                    f"replacement contains mapped source syllable(s): {''.join(clashes)}"
                )

        if errors:
            raise ValidationError('Invalid syllable map', field_errors=errors)

    @property
    def table(self) -> Dict[int, str]:
        return {ord(entry.source): entry.replacement for entry in self.entries}

    def __len__(self):
        return len(self.entries)

    def __contains__(self, syllable: str) -> bool:
        return any(entry.source == syllable for entry in self.entries)

    @classmethod
    def from_pairs(cls, pairs: Iterable, note: str = '') -> 'SyllableMap':
        return cls(tuple(SyllableMapEntry(source, replacement, note) for source, replacement in pairs))

    @classmethod
    def parse(cls, text: str) -> 'SyllableMap':
        entries = []
        for line_number, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip('\r\n')
            if not line.strip() or line.lstrip().startswith('#'):
                continue
            parts = line.split('\t')
            if len(parts) < 2:
                raise ValidationError(
                    f"Syllable map line {line_number}: expected source<TAB>replacement[<TAB>note]",
                    details={'line': line_number},
                )
            source, replacement = parts[0].strip(), parts[1].strip()
            note = parts[2].strip() if len(parts) > 2 else ''
            entries.append(SyllableMapEntry(source, replacement, note))
        return cls(tuple(entries))

    @classmethod
    def load(cls, path: Union[str, Path]) -> 'SyllableMap':
        path = Path(path)
        if not path.is_file():
            raise ResourceNotFoundError(f"Syllable map not found: {path}", resource_type='syllable_map', resource_id=path)
        syllable_map = cls.parse(path.read_text(encoding='utf-8'))
        logger.info(f"Loaded syllable map with {len(syllable_map)} entries", extra={'path': str(path)})
        return syllable_map

    @classmethod
    def default(cls) -> 'SyllableMap':
        return cls.load(DEFAULT_MAP_PATH)

    def dumps(self) -> str:
        lines = ['# source\treplacement\tnote']
        lines.extend(f"{e.source}\t{e.replacement}\t{e.note}" for e in self.entries)
        return '\n'.join(lines) + '\n'


def apply_map(text: str, syllable_map: SyllableMap) -> str:
    """Replace every mapped source syllable in a single left-to-right pass."""
    if not syllable_map.entries:
        return text
    return text.translate(syllable_map.table)


def apply_map_to_corpus(corpus: 'Corpus', syllable_map: SyllableMap) -> 'Corpus':
    """Return a new corpus with titles and sentences mapped."""
    from core.corpus.documents import Corpus

    documents = [
        replace(
            document,
            title=apply_map(document.title, syllable_map),
            sentences=[apply_map(sentence, syllable_map) for sentence in document.sentences],
        )
        for document in corpus.documents
    ]
    return Corpus(documents)
