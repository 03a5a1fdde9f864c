"""
Logging middleware for command-run tracking.
"""
import time
import uuid
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional

from django.conf import settings


logger = logging.getLogger(__name__)

# Django BaseCommand가 모든 명령에 붙이는 옵션
DJANGO_OPTIONS = frozenset({
    'verbosity', 'settings', 'pythonpath', 'traceback', 'no_color', 'force_color', 'skip_checks',
    'stdout', 'stderr',
})


@dataclass
class StageRun:
    """하나의 명령 실행. 미들웨어가 run_id와 시작 시각을 채웁니다."""

    stage: str
    argv: List[str] = field(default_factory=list)
    options: Dict[str, Any] = field(default_factory=dict)
    run_id: Optional[str] = None
    start_time: Optional[float] = None
    duration_ms: Optional[float] = None


class StageLoggingMiddleware:
    """Middleware to log the start, completion and failure of a command run."""

    def __init__(self, get_response: Callable[[StageRun], int] = None):
        self.get_response = get_response or (lambda run: 0)
        self.value_limit = getattr(settings, 'LOG_OPTION_VALUE_LIMIT', 200)
        self.sensitive_options = {'token', 'password', 'api_key'}

    def __call__(self, run: StageRun) -> int:
        self.process_request(run)
        try:
            exit_code = self.get_response(run)
        except Exception as exception:
            self.process_exception(run, exception)
            raise
        self.process_response(run, exit_code)
        return exit_code

    def process_request(self, run: StageRun) -> None:
        run.run_id = run.run_id or str(uuid.uuid4())
        run.start_time = time.time()

        log_data = {
            'run_id': run.run_id,
            'stage': run.stage,
            'options': self.sanitize_options(run.options),
        }
        logger.info(f"Stage started: {run.stage}", extra=log_data)

    def process_response(self, run: StageRun, exit_code: int) -> int:
        run.duration_ms = self._duration_ms(run)
        log_data = {
            'run_id': run.run_id,
            'stage': run.stage,
            'exit_code': exit_code,
            'duration_ms': run.duration_ms,
        }
        if exit_code:
            logger.warning(f"Stage completed with exit code {exit_code}: {run.stage}", extra=log_data)
        else:
            logger.info(f"Stage completed: {run.stage}", extra=log_data)
        return exit_code

    def process_exception(self, run: StageRun, exception: Exception) -> None:
        run.duration_ms = self._duration_ms(run)
        log_data = {
            'run_id': run.run_id,
            'stage': run.stage,
            'exception_type': type(exception).__name__,
            'exception_message': str(exception),
            'duration_ms': run.duration_ms,
        }
        logger.error(f"Stage failed with exception: {run.stage}", extra=log_data)

    def sanitize_options(self, options: Dict[str, Any]) -> Dict[str, str]:
        """Drop Django's own options, redact secrets and truncate long values."""
        sanitized = {}
        for key, value in sorted(options.items()):
            if key in DJANGO_OPTIONS or value is None:
                continue
            if key in self.sensitive_options:
                sanitized[key] = '***REDACTED***'
                continue
            if isinstance(value, (list, tuple)):
                text = ','.join(str(v) for v in value)
            elif isinstance(value, Path):
                text = value.as_posix()
            else:
                text = str(value)
            if len(text) > self.value_limit:
                text = text[:self.value_limit] + '...'
            sanitized[key] = text
        return sanitized

    @staticmethod
    def _duration_ms(run: StageRun) -> Optional[float]:
        if run.start_time is None:
            return None
        return round((time.time() - run.start_time) * 1000, 2)
