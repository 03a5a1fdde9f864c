"""
Checkpoint files (safetensors container).

헤더 metadata에 형식 이름, 형식 버전, 바이트 순서, ModelConfig(JSON)를 기록합니다.
자세한 형식은 docs/checkpoint_format.md를 참고하세요.
"""
import json
import logging
import os
import tempfile
from pathlib import Path
from typing import Dict, Tuple, Union

from safetensors import safe_open
from safetensors.torch import save_file

from core.error_handling.exceptions import ResourceNotFoundError

from .config import DTYPE, ModelConfig
from .encoder import MaskedLanguageModel
from .exceptions import CheckpointError, VocabularyMismatchError

logger = logging.getLogger(__name__)

CHECKPOINT_FORMAT = 'hanlm-mlm'
CHECKPOINT_FORMAT_VERSION = '1'
BYTE_ORDER = 'little'


def save_checkpoint(model: MaskedLanguageModel, path: Union[str, Path], metadata: Dict[str, str] = None) -> Path:
    """
    모델을 저장합니다. 임시 파일에 쓴 뒤 교체하므로 실패해도 일부만 쓰인 파일이 남지 않습니다.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)

    header = {str(k): str(v) for k, v in (metadata or {}).items()}
    header.update({
        'format': CHECKPOINT_FORMAT,
        'format_version': CHECKPOINT_FORMAT_VERSION,
        'byte_order': BYTE_ORDER,
        'model_config': json.dumps(model.config.to_dict(), sort_keys=True),
    })
    tensors = {name: tensor.detach().contiguous().cpu() for name, tensor in model.state_dict().items()}

    fd, tmp_name = tempfile.mkstemp(prefix=path.name, suffix='.tmp', dir=path.parent)
    os.close(fd)
    try:
        save_file(tensors, tmp_name, metadata=header)
        os.replace(tmp_name, path)
    except Exception:
        if os.path.exists(tmp_name):
            os.unlink(tmp_name)
        raise
    logger.info(f"Checkpoint saved: {path}", extra={'tensors': len(tensors)})
    return path


def read_metadata(path: Union[str, Path]) -> Dict[str, str]:
    path = Path(path)
    if not path.is_file():
        raise ResourceNotFoundError(f"Checkpoint not found: {path}", resource_type='checkpoint', resource_id=path)
    try:
        with safe_open(str(path), framework='pt') as f:
            return dict(f.metadata() or {})
    except Exception as e:
        raise CheckpointError(f"Checkpoint is truncated or corrupt: {path} ({e})", path=path) from e


def _config_from_metadata(metadata: Dict[str, str], path: Path) -> ModelConfig:
    if metadata.get('format') != CHECKPOINT_FORMAT:
        raise CheckpointError(f"Not a {CHECKPOINT_FORMAT} checkpoint: {path}", path=path,
                              details={'format': metadata.get('format')})
    if metadata.get('format_version') != CHECKPOINT_FORMAT_VERSION:
        raise CheckpointError(
            f"Unsupported checkpoint format version {metadata.get('format_version')!r}",
            path=path,
        )
    if metadata.get('byte_order', BYTE_ORDER) != BYTE_ORDER:
        raise CheckpointError(f"Unsupported byte order {metadata.get('byte_order')!r}", path=path)
    try:
        return ModelConfig.from_dict(json.loads(metadata['model_config']))
    except (KeyError, json.JSONDecodeError) as e:
        raise CheckpointError(f"Checkpoint has no readable model_config: {path}", path=path) from e


def load_checkpoint(path: Union[str, Path]) -> Tuple[ModelConfig, MaskedLanguageModel]:
    """
    Returns:
        (ModelConfig, MaskedLanguageModel): eval 모드의 float64 모델

    Raises:
        ResourceNotFoundError: 파일이 없을 때
        CheckpointError: 손상된 파일, 형식 불일치, 설정과 텐서 모양 불일치
    """
    path = Path(path)
    metadata = read_metadata(path)
    config = _config_from_metadata(metadata, path)

    try:
        with safe_open(str(path), framework='pt') as f:
            tensors = {name: f.get_tensor(name) for name in f.keys()}
    except Exception as e:
        raise CheckpointError(f"Checkpoint is truncated or corrupt: {path} ({e})", path=path) from e

    model = MaskedLanguageModel(config).to(DTYPE)
    expected = {name: tuple(t.shape) for name, t in model.state_dict().items()}
    found = {name: tuple(t.shape) for name, t in tensors.items()}

    missing = sorted(set(expected) - set(found))
    unexpected = sorted(set(found) - set(expected))
    mismatched = {
        name: {'expected': list(expected[name]), 'found': list(found[name])}
        for name in sorted(set(expected) & set(found))
        if expected[name] != found[name]
    }
    if missing or unexpected or mismatched:
        first = next(iter(mismatched), None)
        summary = (
            f"tensor {first} has shape {mismatched[first]['found']}, config implies {mismatched[first]['expected']}"
            if first else f"missing {missing[:3]} unexpected {unexpected[:3]}"
        )
        raise CheckpointError(
            f"Checkpoint does not match its embedded config: {summary}",
            path=path,
            details={'missing': missing, 'unexpected': unexpected, 'mismatched': mismatched},
        )

    model.load_state_dict({name: t.to(DTYPE) for name, t in tensors.items()})
    model.eval()
    logger.info(f"Checkpoint loaded: {path}", extra={'vocab_size': config.vocab_size})
    return config, model


def check_vocab_compat(config: ModelConfig, vocab) -> None:
    if config.vocab_size != len(vocab):
        raise VocabularyMismatchError(config.vocab_size, len(vocab))
