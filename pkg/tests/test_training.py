"""
마스킹, 손실 함수, 계속 사전학습 루프 테스트.
"""
import math
from types import SimpleNamespace
from unittest.mock import patch

import pytest
import torch

from core.model import forward, init_params, load_checkpoint, parameter_fingerprint
from core.tokenizer.encoding import encode_texts
from core.training import (
    IGNORE_INDEX,
    BaseSnapshot,
    ContinuedPretrainer,
    MaskingError,
    TrainConfig,
    TrainLog,
    TrainerCallback,
    TrainingDivergedError,
    TrainingError,
    ValidationCurveCallback,
    collate,
    cross_lingual_penalty,
    mask_encodings,
    mask_sentence,
    mlm_loss,
    token_nll,
    total_loss,
    train,
    weight_penalty,
)
from core.training.trainer import FINAL_MODEL_NAME, TRAIN_LOG_NAME
from core.error_handling.exceptions import ConfigurationError, ValidationError


def fast_config(**overrides):
    values = dict(epochs=2, batch_size=2, learning_rate=1e-3, seed=0, warmup_ratio=0.0, max_len=16)
    values.update(overrides)
    return TrainConfig(**values)


class TestTrainConfig:
    def test_lambda_alias(self):
        assert TrainConfig.from_dict({'lambda': 0.3}).reg_lambda == 0.3

    def test_unknown_key(self):
        with pytest.raises(ConfigurationError):
            TrainConfig.from_dict({'learning-rate': 1})

    @pytest.mark.parametrize('field,value', [
        ('reg_lambda', -1.0),
        ('mask_probability', 0.0),
        ('mask_probability', 1.0),
        ('batch_size', 0),
        ('masking_scheme', 'span'),
        ('regularizer', 'kl'),
    ])
    def test_rejects(self, field, value):
        with pytest.raises(ValidationError) as ctx:
            TrainConfig(**{field: value})
        assert field in ctx.value.field_errors


class TestMasking:
    """MLM 마스킹"""

    def test_never_masks_special_positions(self, tiny_vocab):
        encoding = encode_texts(['우리는 학교에 가요.'], tiny_vocab, 16)[0]
        generator = torch.Generator().manual_seed(0)
        for _ in range(50):
            batch = mask_sentence(encoding, TrainConfig(mask_probability=0.9), generator, tiny_vocab)
            assert not batch.mask_positions[batch.special_mask].any()
            assert batch.num_masked >= 1
            masked = batch.mask_positions[0]
            assert torch.all(batch.input_ids[0][masked] == tiny_vocab.mask_id)
            assert torch.equal(batch.labels[0][masked], batch.original_ids[0][masked])

    def test_forces_one_position(self, tiny_vocab):
        encoding = encode_texts(['간다'], tiny_vocab, 16)[0]
        generator = torch.Generator().manual_seed(0)
        for _ in range(20):
            batch = mask_sentence(encoding, TrainConfig(mask_probability=0.01), generator, tiny_vocab)
            assert batch.num_masked == 1
            assert batch.labels[0, 1] == tiny_vocab.token_to_id('간다')

    def test_deterministic_for_seed(self, tiny_vocab):
        encodings = encode_texts(['나는 학교에 간다.', '우리는 간다.'], tiny_vocab, 16)
        first = mask_encodings(encodings, TrainConfig(), seed=5, vocab=tiny_vocab)
        second = mask_encodings(encodings, TrainConfig(), seed=5, vocab=tiny_vocab)
        assert torch.equal(first[0].input_ids, second[0].input_ids)
        assert first[0].seed == 5

    def test_bert_scheme_keeps_labels(self, tiny_vocab):
        encoding = encode_texts(['나는 학교에 간다.'], tiny_vocab, 16)[0]
        generator = torch.Generator().manual_seed(1)
        batch = mask_sentence(encoding, TrainConfig(mask_probability=0.5, masking_scheme='bert'), generator, tiny_vocab)
        masked = batch.mask_positions[0]
        assert torch.equal(batch.labels[0][masked], batch.original_ids[0][masked])

    def test_unknown_scheme(self, tiny_vocab):
        encoding = encode_texts(['나는 학교에 간다.'], tiny_vocab, 16)[0]
        config = SimpleNamespace(mask_probability=0.5, masking_scheme='span')
        with pytest.raises(MaskingError):
            mask_sentence(encoding, config, torch.Generator(), tiny_vocab)

    def test_too_long(self, tiny_vocab):
        encoding = encode_texts(['나는 학교에 간다.'], tiny_vocab, 16)[0]
        with pytest.raises(MaskingError):
            mask_sentence(encoding, TrainConfig(), torch.Generator(), tiny_vocab, max_len=3)

    def test_collate_pads(self, tiny_vocab):
        encodings = encode_texts(['간다', '나는 학교에 간다.'], tiny_vocab, 16)
        generator = torch.Generator().manual_seed(0)
        batch = collate([mask_sentence(e, TrainConfig(), generator, tiny_vocab) for e in encodings])
        assert batch.input_ids.shape == (2, len(encodings[1]))
        assert not batch.attention_mask[0, len(encodings[0]):].any()
        assert (batch.labels[0, len(encodings[0]):] == IGNORE_INDEX).all()
        with pytest.raises(MaskingError):
            collate([])


class TestLosses:
    """손실 함수"""

    @pytest.fixture
    def batch(self, tiny_vocab):
        encodings = encode_texts(['나는 학교에 간다.', '우리는 가요.'], tiny_vocab, 16)
        return mask_encodings(encodings, TrainConfig(mask_probability=0.4), seed=0, vocab=tiny_vocab)[0]

    def test_lambda_zero_is_pure_mlm(self, tiny_model, batch):
        output = forward(tiny_model, batch)
        mlm = mlm_loss(output, batch)
        assert total_loss(mlm, torch.tensor(123.0, dtype=mlm.dtype), 0.0) is mlm

    def test_penalty_of_identical_models_is_zero(self, tiny_model, batch):
        output = forward(tiny_model, batch)
        assert cross_lingual_penalty(output, output, batch).item() == 0.0
        assert weight_penalty(tiny_model, dict(tiny_model.named_parameters())).item() == 0.0

    def test_penalty_is_positive_for_different_models(self, tiny_model, tiny_config, batch):
        other = init_params(tiny_config, seed=1)
        assert cross_lingual_penalty(forward(tiny_model, batch), forward(other, batch), batch).item() > 0

    def test_uniform_model_loss_is_log_vocab(self, tiny_config, batch):
        model = init_params(tiny_config.replace(initializer_range=0.0), seed=0)
        nll = token_nll(forward(model, batch).logits, batch.labels)
        per_token = nll[batch.mask_positions]
        assert torch.allclose(per_token, torch.full_like(per_token, math.log(tiny_config.vocab_size)))
        assert mlm_loss(forward(model, batch), batch, reduction='sum').item() == pytest.approx(
            batch.num_masked * math.log(tiny_config.vocab_size)
        )

    def test_no_masked_positions(self, tiny_model, batch):
        batch.labels[:] = IGNORE_INDEX
        with pytest.raises(TrainingError):
            mlm_loss(forward(tiny_model, batch), batch)


class TestTrainer:
    """계속 사전학습 루프"""

    def test_zero_epochs_returns_base(self, tiny_model, tiny_vocab, tiny_corpus):
        result = train(tiny_corpus, tiny_model, fast_config(epochs=0), tiny_vocab)
        assert parameter_fingerprint(result.model) == parameter_fingerprint(tiny_model)
        assert len(result.log) == 0
        assert result.epochs_completed == 0

    def test_base_model_is_not_modified(self, tiny_model, tiny_vocab, tiny_corpus):
        before = parameter_fingerprint(tiny_model)
        result = train(tiny_corpus, tiny_model, fast_config(reg_lambda=0.5), tiny_vocab)
        assert parameter_fingerprint(tiny_model) == before
        assert result.base_fingerprint == before
        assert parameter_fingerprint(result.model) != before

    def test_same_seed_same_log(self, tiny_model, tiny_vocab, tiny_corpus):
        first = train(tiny_corpus, tiny_model, fast_config(reg_lambda=0.3), tiny_vocab)
        second = train(tiny_corpus, tiny_model, fast_config(reg_lambda=0.3), tiny_vocab)
        assert first.log.dumps() == second.log.dumps()
        assert parameter_fingerprint(first.model) == parameter_fingerprint(second.model)

    def test_log_records(self, tiny_model, tiny_vocab, tiny_corpus):
        result = train(tiny_corpus, tiny_model, fast_config(), tiny_vocab)
        assert [r.step for r in result.log] == [1, 2, 3, 4]
        assert [r.epoch for r in result.log] == [1, 1, 2, 2]
        first = result.log.records[0]
        assert first.cross_lingual_l2 == 0.0
        assert first.total_loss == first.mlm_loss
        assert first.timestamp is None

    def test_lambda_zero_regularizer_does_not_change_updates(self, tiny_model, tiny_vocab, tiny_corpus):
        plain = train(tiny_corpus, tiny_model, fast_config(reg_lambda=0.0), tiny_vocab)
        weights = train(tiny_corpus, tiny_model, fast_config(reg_lambda=0.0, regularizer='weights'), tiny_vocab)
        assert parameter_fingerprint(plain.model) == parameter_fingerprint(weights.model)

    def test_writes_log_and_checkpoints(self, tmp_path, tiny_model, tiny_vocab, tiny_corpus):
        result = train(tiny_corpus, tiny_model, fast_config(), tiny_vocab, out_dir=tmp_path)

        assert result.final_checkpoint == tmp_path / FINAL_MODEL_NAME
        _, reloaded = load_checkpoint(result.final_checkpoint)
        assert parameter_fingerprint(reloaded) == parameter_fingerprint(result.model)
        assert (tmp_path / 'checkpoints' / 'epoch-001.safetensors').is_file()
        assert TrainLog.load(tmp_path / TRAIN_LOG_NAME).dumps() == result.log.dumps()

    def test_fresh_model_from_config(self, tiny_vocab, tiny_config, tiny_corpus):
        result = train(tiny_corpus, None, fast_config(epochs=1), tiny_vocab, model_config=tiny_config)
        assert result.model.config == tiny_config

    def test_empty_corpus(self, tiny_model, tiny_vocab):
        with pytest.raises(TrainingError):
            train([], tiny_model, fast_config(), tiny_vocab)

    def test_divergence_stops_with_checkpoint(self, tmp_path, tiny_model, tiny_vocab, tiny_corpus):
        calls = {'n': 0}
        real = mlm_loss

        def exploding(output, batch, reduction='mean'):
            calls['n'] += 1
            loss = real(output, batch, reduction)
            return loss * float('nan') if calls['n'] == 3 else loss

        with patch('core.training.trainer.mlm_loss', side_effect=exploding):
            with pytest.raises(TrainingDivergedError) as ctx:
                train(tiny_corpus, tiny_model, fast_config(), tiny_vocab, out_dir=tmp_path)

        assert ctx.value.step == 2
        assert ctx.value.last_checkpoint == tmp_path / 'checkpoints' / 'last_good.safetensors'
        assert ctx.value.last_checkpoint.is_file()

    def test_callbacks_are_called(self, tiny_model, tiny_vocab, tiny_corpus):
        events = []

        class Recorder(TrainerCallback):
            def on_train_begin(self, trainer):
                events.append('begin')

            def on_epoch_end(self, trainer, epoch):
                events.append(f'epoch{epoch}')

            def on_train_end(self, trainer):
                events.append('end')

        train(tiny_corpus, tiny_model, fast_config(), tiny_vocab, callbacks=[Recorder()])
        assert events == ['begin', 'epoch1', 'epoch2', 'end']

    def test_validation_curves(self, tiny_model, tiny_vocab, tiny_corpus):
        callback = ValidationCurveCallback({'held_out': tiny_corpus})
        train(tiny_corpus, tiny_model, fast_config(), tiny_vocab, callbacks=[callback])

        stray = callback.recorder.series('held_out/stray')
        assert [step for step, _ in stray] == [0, 2, 4]
        assert stray[0][1] == 0.0
        assert stray[-1][1] > 0.0
        assert set(callback.recorder.series_names()) == {
            'held_out/accuracy', 'held_out/log_perplexity', 'held_out/stray',
        }


def test_base_snapshot_is_frozen(tiny_model):
    snapshot = BaseSnapshot(tiny_model)
    with torch.no_grad():
        tiny_model.mlm_bias.add_(1.0)
    assert snapshot.verify()
    assert all(not p.requires_grad for p in snapshot.model.parameters())
