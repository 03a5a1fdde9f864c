"""
Canonical document store.

Corpus file: JSON lines, one object per document with the fields
``{id, date, title, sentences[], source_tag}``, UTF-8 only.
"""
import datetime
import json
import logging
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Any, Dict, Iterable, Iterator, List, Optional, Union

from core.error_handling.exceptions import ResourceNotFoundError, ValidationError

from .exceptions import CorpusEncodingError, CorpusError

logger = logging.getLogger(__name__)


class SourceTag(str, Enum):
    RODONG = 'rodong'
    NEWYEAR = 'newyear'
    NLI = 'nli'
    OTHER = 'other'


DOCUMENT_FIELDS = ('id', 'date', 'title', 'sentences', 'source_tag')


@dataclass(frozen=True)
class Document:
    """
    기사 또는 문장 묶음 하나.

    sentences는 비어 있지 않은 문자열의 튜플이며, date는 ISO-8601 날짜(YYYY-MM-DD) 또는 None입니다.
    """

    id: str
    sentences: tuple
    title: str = ''
    date: Optional[str] = None
    source_tag: SourceTag = SourceTag.OTHER

    def __post_init__(self):
        object.__setattr__(self, 'sentences', tuple(self.sentences))
        object.__setattr__(self, 'source_tag', SourceTag(self.source_tag))
        self.validate()

    def validate(self) -> None:
        errors: Dict[str, List[str]] = {}
        if not isinstance(self.id, str) or not self.id:
            errors.setdefault('id', []).append('id must be a non-empty string')
        if not isinstance(self.title, str):
            errors.setdefault('title', []).append('title must be a string')
        if not self.sentences:
            errors.setdefault('sentences', []).append('document has no sentences')
        for index, sentence in enumerate(self.sentences):
            if not isinstance(sentence, str) or not sentence.strip():
                errors.setdefault('sentences', []).append(f'sentence {index} is empty')
        if self.date is not None:
            try:
                datetime.date.fromisoformat(self.date)
            except (TypeError, ValueError):
                errors.setdefault('date', []).append(f'not an ISO-8601 day: {self.date!r}')
        if errors:
            raise ValidationError(f"Invalid document {self.id!r}", field_errors=errors)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'id': self.id,
            'date': self.date,
            'title': self.title,
            'sentences': list(self.sentences),
            'source_tag': self.source_tag.value,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'Document':
        if not isinstance(data, dict):
            raise ValidationError('document must be a JSON object')
        unknown = sorted(set(data) - set(DOCUMENT_FIELDS))
        if unknown:
            raise ValidationError(f"unknown document fields: {', '.join(unknown)}")
        if 'id' not in data or 'sentences' not in data:
            raise ValidationError('document requires id and sentences')
        if not isinstance(data['sentences'], list):
            raise ValidationError('sentences must be a list')
        return cls(
            id=data['id'],
            sentences=data['sentences'],
            title=data.get('title') or '',
            date=data.get('date'),
            source_tag=data.get('source_tag') or SourceTag.OTHER,
        )


@dataclass(frozen=True)
class LineError:
    line_number: int
    message: str


@dataclass(frozen=True)
class IngestReport:
    """Malformed input lines (or files) collected during ingestion."""

    errors: tuple = ()

    def __bool__(self):
        return bool(self.errors)

    @property
    def line_numbers(self) -> List[int]:
        return [error.line_number for error in self.errors]

    def summary(self) -> str:
        return '; '.join(f"line {e.line_number}: {e.message}" for e in self.errors)


@dataclass(frozen=True)
class Corpus:
    """
    문서 목록. 문서 id는 말뭉치 안에서 유일합니다.

    report는 수집 과정의 오류 보고서이며 동등 비교에는 포함되지 않습니다.
    """

    documents: tuple = ()
    report: IngestReport = field(default_factory=IngestReport, compare=False)

    def __post_init__(self):
        object.__setattr__(self, 'documents', tuple(self.documents))
        seen = set()
        duplicates = []
        for document in self.documents:
            if document.id in seen:
                duplicates.append(document.id)
            seen.add(document.id)
        if duplicates:
            raise CorpusError('Duplicate document ids in corpus', details={'ids': duplicates[:20]})

    def __len__(self):
        return len(self.documents)

    def __iter__(self) -> Iterator[Document]:
        return iter(self.documents)

    @property
    def sentence_count(self) -> int:
        return sum(len(document.sentences) for document in self.documents)

    @property
    def N(self) -> int:
        return self.sentence_count

    def iter_sentences(self) -> Iterator[str]:
        for document in self.documents:
            yield from document.sentences

    def sentences(self) -> List[str]:
        return list(self.iter_sentences())

    def ids(self) -> List[str]:
        return [document.id for document in self.documents]

    @classmethod
    def from_sentences(
        cls,
        sentences: Iterable[str],
        prefix: str = 'sent',
        source_tag: SourceTag = SourceTag.OTHER,
    ) -> 'Corpus':
        """One single-sentence document per sentence, ids ``{prefix}-000000`` onward."""
        return cls(tuple(
            Document(id=f"{prefix}-{index:06d}", sentences=(sentence,), source_tag=source_tag)
            for index, sentence in enumerate(sentences)
        ))


def _read_utf8(path: Path) -> str:
    if not path.is_file():
        raise ResourceNotFoundError(f"Corpus file not found: {path}", resource_type='corpus', resource_id=path)
    try:
        return path.read_bytes().decode('utf-8')
    except UnicodeDecodeError as e:
        raise CorpusEncodingError(f"{path} is not valid UTF-8 (byte {e.start})", path=path) from e


def ingest_jsonl(path: Union[str, Path]) -> Corpus:
    """
    JSON lines 파일을 읽어 Corpus를 만듭니다.

    잘못된 줄은 건너뛰고 줄 번호와 함께 corpus.report에 기록합니다.
    """
    path = Path(path)
    text = _read_utf8(path)

    documents = []
    errors = []
    seen = set()
    for line_number, line in enumerate(text.split('\n'), start=1):
        if not line.strip():
            continue
        try:
            document = Document.from_dict(json.loads(line))
        except json.JSONDecodeError as e:
            errors.append(LineError(line_number, f"invalid JSON: {e.msg}"))
            continue
        except (ValidationError, ValueError) as e:
            errors.append(LineError(line_number, str(e)))
            continue
        if document.id in seen:
            errors.append(LineError(line_number, f"duplicate id {document.id!r}"))
            continue
        seen.add(document.id)
        documents.append(document)

    corpus = Corpus(tuple(documents), report=IngestReport(tuple(errors)))
    if errors:
        logger.warning(
            f"{len(errors)} malformed line(s) in {path}",
            extra={'path': str(path), 'lines': corpus.report.line_numbers[:50]},
        )
    logger.info(
        f"Ingested {len(corpus)} documents",
        extra={'path': str(path), 'sentences': corpus.sentence_count},
    )
    return corpus


def dumps_jsonl(corpus: Corpus) -> str:
    return ''.join(json.dumps(document.to_dict(), ensure_ascii=False) + '\n' for document in corpus.documents)


def write_jsonl(corpus: Corpus, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, 'w', encoding='utf-8', newline='\n') as f:
        f.write(dumps_jsonl(corpus))
    logger.info(f"Corpus written: {path}", extra={'documents': len(corpus)})
    return path
