"""
hanlm 관리 명령의 기본 클래스.

dispatch()가 명령을 실행할 때 manifest를 붙여 주면 입력 파일, 출력 경로, 해석된 설정, seed를
실행 매니페스트에 기록합니다. call_command로 직접 실행하면 기록은 생략됩니다.
"""
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

from django.conf import settings
from django.core.management.base import BaseCommand, CommandError, CommandParser

from core.configuration import load_config_file
from core.manifest import RunManifest

logger = logging.getLogger(__name__)


def parse_named_paths(values: Optional[List[str]], default_prefix: str = '') -> Dict[str, Path]:
    """
    ``name=path`` 목록을 순서를 유지한 사전으로 바꿉니다. 이름이 없으면 파일 이름(확장자 제외)을 씁니다.
    """
    named: Dict[str, Path] = {}
    for value in values or []:
        name, sep, path = value.partition('=')
        if not sep:
            path, name = value, f"{default_prefix}{Path(value).stem}"
        if not name or not path:
            raise CommandError(f"Expected NAME=PATH, got '{value}'")
        if name in named:
            raise CommandError(f"Duplicate name '{name}'")
        named[name] = Path(path)
    return named


def parse_int_list(value: Optional[str]) -> Optional[Tuple[int, ...]]:
    if value is None:
        return None
    try:
        return tuple(int(part) for part in value.split(',') if part.strip())
    except ValueError:
        raise CommandError(f"Expected a comma-separated list of integers, got '{value}'")


class HanlmCommand(BaseCommand):
    """Base class for hanlm commands."""

    requires_system_checks = []
    manifest: Optional[RunManifest] = None

    def add_config_argument(self, parser: CommandParser) -> None:
        parser.add_argument('--config', help='JSON/YAML run configuration with model/train/eval sections')

    def load_config(self, options: Dict[str, Any]) -> Dict[str, Dict[str, Any]]:
        path = options.get('config')
        if path:
            self.record_input(path)
        return load_config_file(path)

    def output_path(self, path: Union[str, Path]) -> Path:
        """Relative output paths resolve against HANLM_OUTPUT_ROOT."""
        path = Path(path)
        return path if path.is_absolute() else Path(settings.OUTPUT_ROOT) / path

    def record_input(self, path: Union[str, Path]) -> None:
        if self.manifest is not None:
            self.manifest.add_input(path)

    def record_output(self, path: Union[str, Path]) -> None:
        if self.manifest is not None:
            self.manifest.add_output(path)

    def record_config(self, section: str, config) -> None:
        if self.manifest is not None:
            self.manifest.config[section] = config.to_dict() if hasattr(config, 'to_dict') else dict(config)

    def record_seed(self, seed: Optional[int]) -> None:
        if self.manifest is not None:
            self.manifest.seed = seed

    def success(self, message: str) -> None:
        self.stdout.write(self.style.SUCCESS(message))

    def read_corpus(self, path: Union[str, Path]):
        """Ingest a JSON lines corpus, echoing malformed lines to stderr."""
        from core.corpus.documents import ingest_jsonl

        self.record_input(path)
        corpus = ingest_jsonl(path)
        if corpus.report:
            self.stderr.write(f"{path}: {corpus.report.summary()}")
        return corpus

    def read_vocab(self, path: Union[str, Path]):
        from core.tokenizer.vocab import Vocabulary

        self.record_input(path)
        return Vocabulary.load(path)

    def read_checkpoint(self, path: Union[str, Path]):
        from core.model.checkpoint import load_checkpoint

        self.record_input(path)
        return load_checkpoint(path)
