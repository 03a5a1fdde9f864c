"""
Run manifests.

명령을 실행할 때마다 OUTPUT_ROOT/manifests/ 아래에 JSON 매니페스트 하나를 씁니다.
argv와 해석된 설정만으로 같은 실행을 다시 할 수 있습니다.
"""
import datetime
import hashlib
import json
import logging
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

from django.conf import settings

logger = logging.getLogger(__name__)

HASH_CHUNK_SIZE = 1 << 20


def file_sha256(path: Union[str, Path]) -> Optional[str]:
    """sha256 of a file; for a directory, of its files' relative paths and hashes in sorted order."""
    path = Path(path)
    if path.is_file():
        digest = hashlib.sha256()
        with open(path, 'rb') as f:
            for chunk in iter(lambda: f.read(HASH_CHUNK_SIZE), b''):
                digest.update(chunk)
        return digest.hexdigest()
    if path.is_dir():
        digest = hashlib.sha256()
        for child in sorted(p for p in path.rglob('*') if p.is_file()):
            digest.update(f"{child.relative_to(path).as_posix()}\0{file_sha256(child)}\n".encode('utf-8'))
        return digest.hexdigest()
    return None


def _now() -> str:
    return datetime.datetime.now(datetime.timezone.utc).isoformat()


@dataclass
class RunManifest:
    command: str
    argv: List[str]
    run_id: str
    config: Dict[str, Any] = field(default_factory=dict)
    inputs: Dict[str, Optional[str]] = field(default_factory=dict)
    outputs: List[str] = field(default_factory=list)
    seed: Optional[int] = None
    version: str = ''
    started_at: str = ''
    finished_at: Optional[str] = None
    wall_clock_seconds: Optional[float] = None
    exit_code: Optional[int] = None
    error: Optional[Dict[str, Any]] = None

    def __post_init__(self):
        self.version = self.version or settings.VERSION
        self.started_at = self.started_at or _now()
        self._clock = time.monotonic()

    def add_input(self, path: Union[str, Path]) -> None:
        self.inputs[str(path)] = file_sha256(path)

    def add_output(self, path: Union[str, Path]) -> None:
        if str(path) not in self.outputs:
            self.outputs.append(str(path))

    def finish(self, exit_code: int, error: Dict[str, Any] = None) -> 'RunManifest':
        self.exit_code = exit_code
        self.error = error
        self.finished_at = _now()
        self.wall_clock_seconds = round(time.monotonic() - self._clock, 3)
        return self

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    def file_name(self) -> str:
        stamp = self.started_at[:19].replace('-', '').replace(':', '')
        return f"{stamp}-{self.command}-{self.run_id[:8]}.json"

    def write(self, directory: Union[str, Path, None] = None) -> Path:
        directory = Path(directory) if directory else Path(settings.OUTPUT_ROOT) / settings.MANIFEST_DIR_NAME
        directory.mkdir(parents=True, exist_ok=True)
        path = directory / self.file_name()
        with open(path, 'w', encoding='utf-8', newline='\n') as f:
            json.dump(self.to_dict(), f, indent=2, ensure_ascii=False, default=str)
            f.write('\n')
        logger.info(f"Run manifest written: {path}", extra={'run_id': self.run_id, 'exit_code': self.exit_code})
        return path

    @classmethod
    def load(cls, path: Union[str, Path]) -> 'RunManifest':
        with open(path, 'r', encoding='utf-8') as f:
            return cls(**json.load(f))
