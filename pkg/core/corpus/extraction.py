"""
Article extraction from saved HTML pages.

Extraction config (JSON)::

    {"title": "h1.title", "date": "span.date", "body": "div.article", "paragraph": "p"}
"""
import hashlib
import json
import logging
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional, Tuple, Union

from bs4 import BeautifulSoup
from django.conf import settings

from core.error_handling.exceptions import ConfigurationError, ResourceNotFoundError
from core.hangul.syllables import normalize_text

from .documents import Corpus, Document, IngestReport, LineError, SourceTag
from .exceptions import CorpusEncodingError, ExtractionError

logger = logging.getLogger(__name__)

DEFAULT_TERMINATORS = ('.', '!', '?', '。')
DEFAULT_DATE_PATTERN = r'(\d{4})\s*[-./년]\s*(\d{1,2})\s*[-./월]\s*(\d{1,2})'


@dataclass(frozen=True)
class SentenceRule:
    """종결 부호 뒤에 공백이나 텍스트 끝이 오면 문장을 나눕니다."""

    terminators: Tuple[str, ...] = DEFAULT_TERMINATORS

    @property
    def pattern(self) -> re.Pattern:
        chars = ''.join(re.escape(t) for t in self.terminators)
        return re.compile(rf'(?<=[{chars}])\s+')

    def split(self, text: str) -> List[str]:
        text = normalize_whitespace(text)
        if not text:
            return []
        return [part.strip() for part in self.pattern.split(text) if part.strip()]


def normalize_whitespace(text: str) -> str:
    return ' '.join(normalize_text(text).split())


def split_sentences(text: str, rule: SentenceRule = None) -> List[str]:
    return (rule or SentenceRule()).split(text)


@dataclass(frozen=True)
class ExtractionRules:
    title: str
    body: str
    date: Optional[str] = None
    paragraph: str = 'p'
    date_pattern: str = DEFAULT_DATE_PATTERN
    sentence_rule: SentenceRule = field(default_factory=SentenceRule)
    source_tag: SourceTag = SourceTag.OTHER

    @classmethod
    def from_dict(cls, data: dict) -> 'ExtractionRules':
        known = {'title', 'body', 'date', 'paragraph', 'date_pattern', 'terminators', 'source_tag'}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ConfigurationError(f"Unknown extraction rule key: {unknown[0]}", config_key=unknown[0])
        for required in ('title', 'body'):
            if not data.get(required):
                raise ConfigurationError(f"Extraction rules need a '{required}' selector", config_key=required)
        terminators = tuple(data.get('terminators') or DEFAULT_TERMINATORS)
        return cls(
            title=data['title'],
            body=data['body'],
            date=data.get('date'),
            paragraph=data.get('paragraph') or 'p',
            date_pattern=data.get('date_pattern') or DEFAULT_DATE_PATTERN,
            sentence_rule=SentenceRule(terminators),
            source_tag=SourceTag(data.get('source_tag') or SourceTag.OTHER),
        )

    @classmethod
    def load(cls, path: Union[str, Path]) -> 'ExtractionRules':
        path = Path(path)
        if not path.is_file():
            raise ResourceNotFoundError(f"Extraction rules not found: {path}", resource_type='extraction_rules', resource_id=path)
        with open(path, 'r', encoding='utf-8') as f:
            return cls.from_dict(json.load(f))


def parse_date(text: str, pattern: str = DEFAULT_DATE_PATTERN) -> Optional[str]:
    match = re.search(pattern, text)
    if not match:
        return None
    year, month, day = (int(group) for group in match.groups()[:3])
    return f"{year:04d}-{month:02d}-{day:02d}"


def extract_article(html: str, rules: ExtractionRules, doc_id: str = None) -> Document:
    """
    설정된 선택자로 제목, 날짜, 본문 문단을 추출해 Document를 만듭니다.

    Raises:
        ExtractionError: 선택자에 해당하는 요소가 없을 때 (누락된 필드 이름 포함)
    """
    if not html or not html.strip():
        raise ExtractionError('html is empty', field='html')

    soup = BeautifulSoup(html, 'html.parser')

    title_node = soup.select_one(rules.title)
    if title_node is None:
        raise ExtractionError('title not found', field='title', details={'selector': rules.title})
    title = normalize_whitespace(title_node.get_text(' '))

    date = None
    if rules.date:
        date_node = soup.select_one(rules.date)
        if date_node is None:
            raise ExtractionError('date not found', field='date', details={'selector': rules.date})
        date = parse_date(date_node.get_text(' '), rules.date_pattern)
        if date is None:
            raise ExtractionError('date not parseable', field='date', details={'text': date_node.get_text(strip=True)})

    body_node = soup.select_one(rules.body)
    if body_node is None:
        raise ExtractionError('body not found', field='body', details={'selector': rules.body})

    paragraphs = body_node.select(rules.paragraph) or [body_node]
    sentences = []
    for paragraph in paragraphs:
        sentences.extend(rules.sentence_rule.split(paragraph.get_text(' ')))
    if not sentences:
        raise ExtractionError('body not found', field='body', details={'reason': 'no non-empty paragraphs'})

    if doc_id is None:
        doc_id = hashlib.sha256(f"{title}\n{date}".encode('utf-8')).hexdigest()[:16]
    return Document(id=doc_id, sentences=tuple(sentences), title=title, date=date, source_tag=rules.source_tag)


def _extract_file(path: Path, rules: ExtractionRules) -> Document:
    try:
        html = path.read_bytes().decode('utf-8')
    except UnicodeDecodeError as e:
        raise CorpusEncodingError(f"{path.name} is not valid UTF-8 (byte {e.start})", path=path) from e
    return extract_article(html, rules, doc_id=path.stem)


def ingest_html_dir(directory: Union[str, Path], rules: ExtractionRules, workers: int = None) -> Corpus:
    """
    디렉토리의 *.html 파일을 병렬로 추출합니다.

    실패한 파일은 건너뛰고 보고서에 파일 순번과 이름으로 기록합니다.
    """
    directory = Path(directory)
    if not directory.is_dir():
        raise ResourceNotFoundError(f"HTML directory not found: {directory}", resource_type='directory', resource_id=directory)

    paths = sorted(p for p in directory.iterdir() if p.suffix.lower() in ('.html', '.htm'))
    workers = workers or settings.NUM_WORKERS

    def attempt(path):
        try:
            return _extract_file(path, rules), None
        except (ExtractionError, CorpusEncodingError) as e:
            return None, e

    with ThreadPoolExecutor(max_workers=max(1, workers)) as executor:
        results = list(executor.map(attempt, paths))

    documents = []
    errors = []
    for index, (path, (document, error)) in enumerate(zip(paths, results), start=1):
        if error is not None:
            errors.append(LineError(index, f"{path.name}: {error.message}"))
            logger.warning(f"Skipping {path.name}: {error.message}", extra={'path': str(path)})
            continue
        documents.append(document)

    corpus = Corpus(tuple(documents), report=IngestReport(tuple(errors)))
    logger.info(
        f"Extracted {len(corpus)} of {len(paths)} articles",
        extra={'directory': str(directory), 'sentences': corpus.sentence_count, 'workers': workers},
    )
    return corpus
