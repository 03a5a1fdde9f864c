"""
말뭉치 수집 패키지.

JSON lines, 기사 HTML, NLI TSV를 하나의 문서 저장 형식(Corpus)으로 수집하고
문서 단위의 결정적 학습/검증 분할을 제공합니다.
"""
from .documents import (
    SourceTag,
    Document,
    Corpus,
    IngestReport,
    LineError,
    ingest_jsonl,
    write_jsonl,
    dumps_jsonl,
)
from .extraction import ExtractionRules, SentenceRule, extract_article, ingest_html_dir, split_sentences
from .splits import split_corpus
from .nli import NliRecord, NliSplit, read_nli_tsv, nli_to_sentences, nli_to_corpus
from .exceptions import CorpusError, CorpusEncodingError, ExtractionError

__all__ = [
    'SourceTag',
    'Document',
    'Corpus',
    'IngestReport',
    'LineError',
    'ingest_jsonl',
    'write_jsonl',
    'dumps_jsonl',
    'ExtractionRules',
    'SentenceRule',
    'extract_article',
    'ingest_html_dir',
    'split_sentences',
    'split_corpus',
    'NliRecord',
    'NliSplit',
    'read_nli_tsv',
    'nli_to_sentences',
    'nli_to_corpus',
    'CorpusError',
    'CorpusEncodingError',
    'ExtractionError',
]
