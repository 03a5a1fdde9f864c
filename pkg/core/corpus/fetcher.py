"""
Optional sequential article fetcher.

요청 사이에 대기 시간을 두고, 받은 URL은 journal 파일에 기록해 중단 후 재개할 수 있습니다.
"""
import hashlib
import json
import logging
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable, List, Set, Union

import httpx
from django.conf import settings

from core.error_handling.exceptions import ExternalServiceError

from .exceptions import CorpusEncodingError

logger = logging.getLogger(__name__)

JOURNAL_NAME = 'fetch_journal.jsonl'


@dataclass
class FetchResult:
    fetched: List[str] = field(default_factory=list)
    skipped: List[str] = field(default_factory=list)
    failed: List[Union[ExternalServiceError, CorpusEncodingError]] = field(default_factory=list)


class ArticleFetcher:
    """
    HTML 페이지를 하나씩 내려받아 out_dir에 저장합니다.

    Args:
        out_dir: 저장 디렉토리 (journal도 이곳에 기록)
        delay: 요청 간 대기 시간(초). 기본값은 settings.FETCH_DELAY_SECONDS
        client: httpx.Client (테스트에서는 MockTransport를 사용하는 클라이언트)
        sleep: 대기 함수
    """

    def __init__(
        self,
        out_dir: Union[str, Path],
        delay: float = None,
        client: httpx.Client = None,
        sleep: Callable[[float], None] = time.sleep,
        timeout: float = 30.0,
    ):
        self.out_dir = Path(out_dir)
        self.delay = settings.FETCH_DELAY_SECONDS if delay is None else delay
        self.client = client or httpx.Client(timeout=timeout, follow_redirects=True)
        self.sleep = sleep
        self.journal_path = self.out_dir / JOURNAL_NAME

    @staticmethod
    def file_name(url: str) -> str:
        return hashlib.sha256(url.encode('utf-8')).hexdigest()[:20] + '.html'

    def completed_urls(self) -> Set[str]:
        if not self.journal_path.is_file():
            return set()
        done = set()
        with open(self.journal_path, 'r', encoding='utf-8') as f:
            for line in f:
                line = line.strip()
                if not line:
                    continue
                try:
                    done.add(json.loads(line)['url'])
                except (json.JSONDecodeError, KeyError):
                    logger.warning('Ignoring corrupt journal line', extra={'journal': str(self.journal_path)})
        return done

    def _record(self, url: str, file_name: str, status: int) -> None:
        with open(self.journal_path, 'a', encoding='utf-8', newline='\n') as f:
            f.write(json.dumps({'url': url, 'file': file_name, 'status': status}, ensure_ascii=False) + '\n')

    def fetch(self, url: str) -> Path:
        try:
            response = self.client.get(url)
            response.raise_for_status()
        except httpx.HTTPStatusError as e:
            raise ExternalServiceError(
                f"GET {url} returned {e.response.status_code}",
                service_name='article_fetcher',
                service_response={'status_code': e.response.status_code, 'url': url},
            ) from e
        except httpx.HTTPError as e:
            raise ExternalServiceError(f"GET {url} failed: {e}", service_name='article_fetcher', details={'url': url}) from e

        target = self.out_dir / self.file_name(url)
        target.write_text(self.decode(url, response), encoding='utf-8')
        self._record(url, target.name, response.status_code)
        return target

    @staticmethod
    def decode(url: str, response: httpx.Response) -> str:
        """응답 본문을 UTF-8로 엄격하게 풉니다. 다른 charset은 거부합니다."""
        charset = response.charset_encoding
        if charset and charset.lower().replace('_', '-') not in ('utf-8', 'utf8'):
            raise CorpusEncodingError(
                f"GET {url} declared charset {charset}, expected UTF-8",
                details={'url': url, 'charset': charset},
            )
        try:
            return response.content.decode('utf-8')
        except UnicodeDecodeError as e:
            raise CorpusEncodingError(
                f"GET {url} body is not valid UTF-8 (byte offset {e.start})",
                details={'url': url, 'offset': e.start},
            ) from e

    def fetch_all(self, urls: Iterable[str]) -> FetchResult:
        self.out_dir.mkdir(parents=True, exist_ok=True)
        done = self.completed_urls()
        result = FetchResult()
        first = True
        for url in urls:
            if url in done:
                result.skipped.append(url)
                continue
            if not first and self.delay > 0:
                self.sleep(self.delay)
            first = False
            try:
                self.fetch(url)
                result.fetched.append(url)
                done.add(url)
            except (ExternalServiceError, CorpusEncodingError) as e:
                logger.warning(e.message, extra={'url': url})
                result.failed.append(e)

        logger.info(
            f"Fetched {len(result.fetched)} pages",
            extra={'skipped': len(result.skipped), 'failed': len(result.failed)},
        )
        return result

    def close(self) -> None:
        self.client.close()
