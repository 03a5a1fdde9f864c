"""
기사 HTML 추출과 수집기 테스트.
"""
import json
import shutil
from pathlib import Path

import httpx
import pytest
from django.test import SimpleTestCase

from core.corpus import (
    CorpusEncodingError,
    ExtractionError,
    ExtractionRules,
    SentenceRule,
    SourceTag,
    extract_article,
    ingest_html_dir,
    split_sentences,
)
from core.corpus.extraction import parse_date
from core.corpus.fetcher import JOURNAL_NAME, ArticleFetcher
from core.error_handling.exceptions import ConfigurationError, ExternalServiceError

FIXTURES = Path(__file__).resolve().parent / 'fixtures'


def read_fixture(name: str) -> str:
    return (FIXTURES / name).read_text(encoding='utf-8')


class TestSentenceSplitting(SimpleTestCase):
    """문장 분리 규칙 테스트"""

    def test_split_on_terminator_followed_by_space(self):
        self.assertEqual(split_sentences('가자.  나는 간다! 3.5는 수?'), ['가자.', '나는 간다!', '3.5는 수?'])

    def test_whitespace_only(self):
        self.assertEqual(split_sentences('  \n\t '), [])

    def test_custom_terminators(self):
        rule = SentenceRule(terminators=(';',))
        self.assertEqual(rule.split('하나; 둘. 셋'), ['하나;', '둘. 셋'])


class TestExtractArticle(SimpleTestCase):
    """기사 추출 테스트"""

    def setUp(self):
        self.rules = ExtractionRules.load(FIXTURES / 'rules.json')

    def test_extracts_fields(self):
        document = extract_article(read_fixture('article.html'), self.rules, doc_id='article')

        self.assertEqual(document.id, 'article')
        self.assertEqual(document.title, '조국해방 70돐을 맞으며')
        self.assertEqual(document.date, '2020-10-10')
        self.assertEqual(document.source_tag, SourceTag.RODONG)
        self.assertEqual(
            document.sentences,
            ('온 나라 인민이 명절을 경축하였다.', '로동자들은 공장에서 일하였다!', '도이췰란드에서도 대표단이 왔다.'),
        )

    def test_missing_title_names_field(self):
        with self.assertRaises(ExtractionError) as ctx:
            extract_article(read_fixture('article_no_title.html'), self.rules)
        self.assertEqual(ctx.exception.field, 'title')
        self.assertEqual(ctx.exception.error_code, 'EXTRACTION_ERROR')

    def test_unparseable_date(self):
        rules = ExtractionRules.from_dict({'title': 'h1.title', 'body': 'div.body', 'date': 'span.date'})
        with self.assertRaises(ExtractionError) as ctx:
            extract_article(read_fixture('article.html'), rules)
        self.assertEqual(ctx.exception.field, 'date')

    def test_missing_body(self):
        rules = ExtractionRules.from_dict({'title': 'h1.title', 'body': 'div.missing'})
        with self.assertRaises(ExtractionError) as ctx:
            extract_article(read_fixture('article.html'), rules)
        self.assertEqual(ctx.exception.field, 'body')

    def test_default_id_is_stable(self):
        html = read_fixture('article.html')
        self.assertEqual(extract_article(html, self.rules).id, extract_article(html, self.rules).id)

    def test_rules_require_title_and_body(self):
        with self.assertRaises(ConfigurationError):
            ExtractionRules.from_dict({'title': 'h1'})
        with self.assertRaises(ConfigurationError):
            ExtractionRules.from_dict({'title': 'h1', 'body': 'div', 'colour': 'red'})

    def test_parse_date_variants(self):
        self.assertEqual(parse_date('2020.1.5'), '2020-01-05')
        self.assertEqual(parse_date('2019년 12월 31일'), '2019-12-31')
        self.assertIsNone(parse_date('날짜 없음'))


def test_ingest_html_dir_skips_failures(tmp_path):
    shutil.copy(FIXTURES / 'article.html', tmp_path / 'a.html')
    shutil.copy(FIXTURES / 'article_no_title.html', tmp_path / 'b.html')
    (tmp_path / 'c.html').write_bytes('<h1 class="title">\xe9</h1>'.encode('latin-1'))
    (tmp_path / 'notes.txt').write_text('무시', encoding='utf-8')

    rules = ExtractionRules.load(FIXTURES / 'rules.json')
    corpus = ingest_html_dir(tmp_path, rules, workers=2)

    assert corpus.ids() == ['a']
    assert corpus.report.line_numbers == [2, 3]
    assert 'b.html' in corpus.report.summary()
    assert 'c.html' in corpus.report.summary()


def test_non_utf8_file_raises_encoding_error(tmp_path):
    path = tmp_path / 'bad.html'
    path.write_bytes(b'<p>\xff</p>')
    from core.corpus.extraction import _extract_file

    with pytest.raises(CorpusEncodingError):
        _extract_file(path, ExtractionRules(title='h1', body='p'))


class TestArticleFetcher:
    """MockTransport로 수집기를 검사합니다."""

    def make_client(self, statuses=None):
        statuses = statuses or {}
        self.requests = []

        def handler(request: httpx.Request) -> httpx.Response:
            self.requests.append(str(request.url))
            status = statuses.get(str(request.url), 200)
            return httpx.Response(status, text=f'<html><body>{request.url.path}</body></html>')

        return httpx.Client(transport=httpx.MockTransport(handler))

    def test_sleeps_between_requests_only(self, tmp_path):
        sleeps = []
        fetcher = ArticleFetcher(tmp_path, delay=1.5, client=self.make_client(), sleep=sleeps.append)
        urls = ['https://example.org/1', 'https://example.org/2', 'https://example.org/3']

        result = fetcher.fetch_all(urls)

        assert result.fetched == urls
        assert sleeps == [1.5, 1.5]
        for url in urls:
            assert (tmp_path / ArticleFetcher.file_name(url)).is_file()

    def test_resume_skips_journaled_urls(self, tmp_path):
        urls = ['https://example.org/1', 'https://example.org/2']
        first = ArticleFetcher(tmp_path, delay=0, client=self.make_client())
        first.fetch_all(urls[:1])

        second = ArticleFetcher(tmp_path, delay=0, client=self.make_client())
        result = second.fetch_all(urls)

        assert result.skipped == urls[:1]
        assert result.fetched == urls[1:]
        assert self.requests == urls[1:]
        lines = (tmp_path / JOURNAL_NAME).read_text(encoding='utf-8').splitlines()
        assert [json.loads(line)['url'] for line in lines] == urls

    def test_http_error_is_recorded_as_failure(self, tmp_path):
        client = self.make_client({'https://example.org/bad': 500})
        fetcher = ArticleFetcher(tmp_path, delay=0, client=client)

        result = fetcher.fetch_all(['https://example.org/bad', 'https://example.org/ok'])

        assert result.fetched == ['https://example.org/ok']
        assert len(result.failed) == 1
        assert isinstance(result.failed[0], ExternalServiceError)
        assert result.failed[0].service_response['status_code'] == 500
        assert 'https://example.org/bad' not in fetcher.completed_urls()

    def test_non_utf8_pages_are_rejected(self, tmp_path):
        page = '<html><body>로동신문</body></html>'
        bodies = {
            '/declared': httpx.Response(200, content=page.encode('euc-kr'),
                                        headers={'content-type': 'text/html; charset=euc-kr'}),
            '/undeclared': httpx.Response(200, content=page.encode('euc-kr'), headers={'content-type': 'text/html'}),
            '/ok': httpx.Response(200, content=page.encode('utf-8'),
                                  headers={'content-type': 'text/html; charset=UTF-8'}),
        }
        client = httpx.Client(transport=httpx.MockTransport(lambda request: bodies[request.url.path]))
        fetcher = ArticleFetcher(tmp_path, delay=0, client=client)
        urls = ['https://example.org/declared', 'https://example.org/undeclared', 'https://example.org/ok']

        result = fetcher.fetch_all(urls)

        assert result.fetched == ['https://example.org/ok']
        assert [type(error) for error in result.failed] == [CorpusEncodingError, CorpusEncodingError]
        assert result.failed[0].details['charset'] == 'euc-kr'
        assert 'offset' in result.failed[1].details
        assert not (tmp_path / ArticleFetcher.file_name(urls[0])).exists()
        saved = (tmp_path / ArticleFetcher.file_name(urls[2])).read_text(encoding='utf-8')
        assert saved == page
