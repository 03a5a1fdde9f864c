"""
NLI sentence-pair datasets.

TSV with a header row. Columns ``premise``/``hypothesis``/``split``; the KorNLI
column names ``sentence1``/``sentence2`` are accepted as well.
"""
import csv
import io
import logging
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import List, Optional, Sequence, Union

from core.error_handling.exceptions import ResourceNotFoundError, ValidationError

from .documents import Corpus, Document, SourceTag
from .exceptions import CorpusEncodingError, CorpusError

logger = logging.getLogger(__name__)

COLUMN_ALIASES = {
    'premise': ('premise', 'sentence1'),
    'hypothesis': ('hypothesis', 'sentence2'),
    'split': ('split',),
}


class NliSplit(str, Enum):
    TRAIN = 'train'
    DEV = 'dev'
    TEST = 'test'


@dataclass(frozen=True)
class NliRecord:
    premise: str
    hypothesis: str
    split: NliSplit = NliSplit.TRAIN

    def __post_init__(self):
        object.__setattr__(self, 'split', NliSplit(self.split))
        errors = {}
        if not self.premise or not self.premise.strip():
            errors['premise'] = ['premise is empty']
        if not self.hypothesis or not self.hypothesis.strip():
            errors['hypothesis'] = ['hypothesis is empty']
        if errors:
            raise ValidationError('Invalid NLI record', field_errors=errors)

    @property
    def text(self) -> str:
        return f"{self.premise} {self.hypothesis}"


def _resolve_columns(header: Sequence[str], split: Optional[NliSplit]) -> dict:
    columns = {}
    for name, aliases in COLUMN_ALIASES.items():
        for alias in aliases:
            if alias in header:
                columns[name] = header.index(alias)
                break
    missing = [name for name in ('premise', 'hypothesis') if name not in columns]
    if 'split' not in columns and split is None:
        missing.append('split')
    if missing:
        raise CorpusError(f"NLI file is missing column(s): {', '.join(missing)}", details={'header': list(header)})
    return columns


def read_nli_tsv(path: Union[str, Path], split: Union[NliSplit, str, None] = None) -> List[NliRecord]:
    """
    NLI TSV 파일을 읽습니다.

    split 열이 없으면 인자로 받은 split을 모든 레코드에 부여하고,
    split 열이 있으면서 인자가 주어지면 해당 split만 남깁니다.
    """
    path = Path(path)
    if not path.is_file():
        raise ResourceNotFoundError(f"NLI file not found: {path}", resource_type='nli', resource_id=path)
    try:
        text = path.read_bytes().decode('utf-8')
    except UnicodeDecodeError as e:
        raise CorpusEncodingError(f"{path} is not valid UTF-8 (byte {e.start})", path=path) from e

    split = NliSplit(split) if split is not None else None
    reader = csv.reader(io.StringIO(text), delimiter='\t', quoting=csv.QUOTE_NONE)
    header = next(reader, None)
    if header is None:
        raise CorpusError(f"NLI file is empty: {path}")
    columns = _resolve_columns([h.strip() for h in header], split)

    records = []
    for line_number, row in enumerate(reader, start=2):
        if not row or not any(cell.strip() for cell in row):
            continue
        try:
            row_split = row[columns['split']].strip() if 'split' in columns else split
            record = NliRecord(
                premise=row[columns['premise']].strip(),
                hypothesis=row[columns['hypothesis']].strip(),
                split=row_split,
            )
        except (IndexError, ValueError, ValidationError) as e:
            raise CorpusError(f"{path}: malformed NLI row at line {line_number}: {e}", details={'line': line_number}) from e
        if split is None or record.split == split:
            records.append(record)

    logger.info(f"Read {len(records)} NLI records", extra={'path': str(path), 'split': split.value if split else None})
    return records


def nli_to_sentences(records: Sequence[NliRecord]) -> List[str]:
    """Premise and hypothesis joined by a single space, one string per record."""
    return [record.text for record in records]


def nli_to_corpus(records: Sequence[NliRecord], prefix: str = 'nli') -> Corpus:
    return Corpus(tuple(
        Document(
            id=f"{prefix}-{record.split.value}-{index:06d}",
            sentences=(record.text,),
            source_tag=SourceTag.NLI,
        )
        for index, record in enumerate(records)
    ))
