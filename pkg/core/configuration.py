"""
Run configuration files.

하나의 JSON(또는 YAML) 문서에 ``model``, ``train``, ``eval`` 구역을 둘 수 있습니다.
우선순위: 기본값 < 설정 파일 < 명령행 플래그
"""
import logging
from pathlib import Path
from typing import Any, Dict, Mapping, Optional, Type, Union

import yaml

from core.error_handling.exceptions import ConfigurationError, ResourceNotFoundError

logger = logging.getLogger(__name__)

CONFIG_SECTIONS = ('model', 'train', 'eval')


def load_config_file(path: Union[str, Path, None]) -> Dict[str, Dict[str, Any]]:
    """Read a config file; ``None`` yields empty sections."""
    if path is None:
        return {section: {} for section in CONFIG_SECTIONS}
    path = Path(path)
    if not path.is_file():
        raise ResourceNotFoundError(f"Config file not found: {path}", resource_type='config', resource_id=path)
    try:
        data = yaml.safe_load(path.read_text(encoding='utf-8'))
    except yaml.YAMLError as e:
        raise ConfigurationError(f"Config file is not valid JSON/YAML: {path} ({e})") from e

    if data is None:
        data = {}
    if not isinstance(data, dict):
        raise ConfigurationError(f"Config file must hold a mapping: {path}")
    for key, value in data.items():
        if key not in CONFIG_SECTIONS:
            raise ConfigurationError(f"Unknown config section: {key}", config_key=str(key))
        if value is not None and not isinstance(value, dict):
            raise ConfigurationError(f"Config section '{key}' must be a mapping", config_key=str(key))

    logger.debug(f"Config file loaded: {path}", extra={'sections': sorted(data)})
    return {section: dict(data.get(section) or {}) for section in CONFIG_SECTIONS}


def resolve_config(
    config_class: Type,
    file_section: Optional[Mapping[str, Any]] = None,
    flags: Optional[Mapping[str, Any]] = None,
    defaults: Optional[Mapping[str, Any]] = None,
):
    """
    defaults < file_section < flags 순서로 겹쳐 config_class.from_dict로 만듭니다.

    값이 None인 플래그는 사용자가 주지 않은 것으로 보고 무시합니다.
    별칭 키(lambda, dropout_prob)는 구역마다 먼저 풀어서 겹칩니다.
    """
    normalize = getattr(config_class, 'normalize_keys', dict)
    data: Dict[str, Any] = normalize(defaults or {})
    data.update(normalize(file_section or {}))
    data.update(normalize({key: value for key, value in (flags or {}).items() if value is not None}))
    return config_class.from_dict(data)
