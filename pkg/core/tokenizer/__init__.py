"""
WordPiece 토크나이저 패키지.
"""
from .vocab import Vocabulary, SPECIAL_TOKENS, PAD, UNK, CLS, SEP, MASK, CONTINUATION_PREFIX
from .wordpiece import build_vocab
from .encoding import TokenizedSentence, Encoding, WordPieceTokenizer, tokenize, encode_pair, pre_tokenize

__all__ = [
    'Vocabulary',
    'SPECIAL_TOKENS',
    'PAD',
    'UNK',
    'CLS',
    'SEP',
    'MASK',
    'CONTINUATION_PREFIX',
    'build_vocab',
    'TokenizedSentence',
    'Encoding',
    'WordPieceTokenizer',
    'tokenize',
    'encode_pair',
    'pre_tokenize',
]
