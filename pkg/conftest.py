"""
pytest 공통 fixture 및 설정을 위한 conftest.py 파일입니다.
"""
import pytest
import torch
from hypothesis import settings as hypothesis_settings

from core.corpus.documents import Corpus
from core.model.config import ModelConfig
from core.model.encoder import init_params
from core.tokenizer.vocab import SPECIAL_TOKENS, Vocabulary

hypothesis_settings.register_profile('hanlm', deadline=None)
hypothesis_settings.load_profile('hanlm')

TINY_TOKENS = SPECIAL_TOKENS + ('나', '##는', '학교', '##에', '간다', '##다', '우리', '.', '가', '##요')


# 테스트마다 출력 루트를 임시 디렉토리로 교체
@pytest.fixture(autouse=True)
def output_root(tmp_path, settings):
    settings.OUTPUT_ROOT = tmp_path / 'runs'
    return settings.OUTPUT_ROOT


@pytest.fixture
def tiny_vocab():
    return Vocabulary(TINY_TOKENS)


@pytest.fixture
def tiny_config(tiny_vocab):
    return ModelConfig(
        vocab_size=len(tiny_vocab),
        hidden_size=8,
        num_layers=1,
        num_heads=2,
        intermediate_size=16,
        max_position=16,
        hidden_dropout_prob=0.0,
        attention_dropout_prob=0.0,
    )


@pytest.fixture
def tiny_model(tiny_config):
    return init_params(tiny_config, seed=0)


@pytest.fixture
def tiny_corpus():
    return Corpus.from_sentences(['나는 학교에 간다.', '우리는 간다.', '나는 가요.', '우리는 학교에 가요.'])


@pytest.fixture(autouse=True)
def deterministic_torch():
    torch.use_deterministic_algorithms(True)
    yield
    torch.use_deterministic_algorithms(False)
