"""
Subword vocabulary.

File format: UTF-8, one token per line, line number = id, the five special tokens first.
"""
import logging
from pathlib import Path
from typing import Dict, Iterable, List, Sequence, Union

from core.error_handling.exceptions import ResourceNotFoundError

from .exceptions import VocabularyError

logger = logging.getLogger(__name__)

PAD = '[PAD]'
UNK = '[UNK]'
CLS = '[CLS]'
SEP = '[SEP]'
MASK = '[MASK]'
SPECIAL_TOKENS = (PAD, UNK, CLS, SEP, MASK)

CONTINUATION_PREFIX = '##'


class Vocabulary:
    """
    순서가 있는 서브워드 목록과 토큰 -> id 사상.

    id는 0..M-1로 빈틈이 없고, 특수 토큰 다섯 개는 항상 0~4번에 위치합니다.
    생성 후에는 변경되지 않습니다.
    """

    def __init__(self, tokens: Sequence[str]):
        self._tokens = tuple(tokens)
        self._id_of = {token: index for index, token in enumerate(self._tokens)}
        self._validate()

    def _validate(self) -> None:
        if tuple(self._tokens[:len(SPECIAL_TOKENS)]) != SPECIAL_TOKENS:
            raise VocabularyError(
                f"Vocabulary must start with {', '.join(SPECIAL_TOKENS)}",
                details={'head': list(self._tokens[:len(SPECIAL_TOKENS)])},
            )
        if len(self._id_of) != len(self._tokens):
            duplicates = sorted({t for t in self._tokens if self._tokens.count(t) > 1})
            raise VocabularyError('Vocabulary contains duplicate tokens', details={'duplicates': duplicates[:20]})
        for token in self._tokens[len(SPECIAL_TOKENS):]:
            if not token or token == CONTINUATION_PREFIX or token.isspace():
                raise VocabularyError(f"Invalid vocabulary entry: {token!r}")

    @property
    def tokens(self) -> tuple:
        return self._tokens

    @property
    def id_of(self) -> Dict[str, int]:
        return dict(self._id_of)

    @property
    def size(self) -> int:
        return len(self._tokens)

    def __len__(self):
        return len(self._tokens)

    def __contains__(self, token: str) -> bool:
        return token in self._id_of

    def __eq__(self, other):
        return isinstance(other, Vocabulary) and self._tokens == other._tokens

    def __hash__(self):
        return hash(self._tokens)

    @property
    def pad_id(self) -> int:
        return self._id_of[PAD]

    @property
    def unk_id(self) -> int:
        return self._id_of[UNK]

    @property
    def cls_id(self) -> int:
        return self._id_of[CLS]

    @property
    def sep_id(self) -> int:
        return self._id_of[SEP]

    @property
    def mask_id(self) -> int:
        return self._id_of[MASK]

    @property
    def special_ids(self) -> frozenset:
        return frozenset(range(len(SPECIAL_TOKENS)))

    def get(self, token: str, default=None):
        return self._id_of.get(token, default)

    def token_to_id(self, token: str) -> int:
        return self._id_of.get(token, self.unk_id)

    def convert_ids_to_tokens(self, ids: Iterable[int]) -> List[str]:
        return [self._tokens[i] for i in ids]

    def content_tokens(self) -> tuple:
        return self._tokens[len(SPECIAL_TOKENS):]

    def detokenize(self, ids: Iterable[int]) -> str:
        """Join ``##`` continuation pieces back onto the preceding word."""
        words: List[str] = []
        for token in self.convert_ids_to_tokens(ids):
            if token.startswith(CONTINUATION_PREFIX) and words:
                words[-1] += token[len(CONTINUATION_PREFIX):]
            else:
                words.append(token)
        return ' '.join(words)

    def dumps(self) -> str:
        return '\n'.join(self._tokens) + '\n'

    def save(self, path: Union[str, Path]) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        # newline='\n'으로 고정해야 플랫폼과 무관하게 바이트가 같습니다
        with open(path, 'w', encoding='utf-8', newline='\n') as f:
            f.write(self.dumps())
        logger.info(f"Vocabulary saved: {path}", extra={'size': self.size})
        return path

    @classmethod
    def load(cls, path: Union[str, Path]) -> 'Vocabulary':
        path = Path(path)
        if not path.is_file():
            raise ResourceNotFoundError(f"Vocabulary file not found: {path}", resource_type='vocabulary', resource_id=path)
        with open(path, 'r', encoding='utf-8', newline='') as f:
            lines = f.read().split('\n')
        if lines and lines[-1] == '':
            lines.pop()
        return cls([line.rstrip('\r') for line in lines])
