"""
Masked-LM metrics: log-perplexity, MLM accuracy, representation stray.

평가 마스킹은 (데이터셋, seed)마다 한 번만 만들고 비교하는 모든 모델에 같은 입력을 넣습니다(paired comparison).
log-perplexity는 자연로그이며 기본적으로 마스킹된 토큰 하나당 평균입니다.
"""
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

import torch

from core.model.checkpoint import check_vocab_compat
from core.model.encoder import MaskedLanguageModel
from core.tokenizer.encoding import Encoding, encode_texts
from core.tokenizer.vocab import Vocabulary
from core.training.losses import representation_distances, token_nll
from core.training.masking import MaskedBatch, collate, mask_encodings, unmasked_batch

from .config import EvalConfig
from .exceptions import EvaluationError

logger = logging.getLogger(__name__)


@dataclass
class EvalSet:
    """인코딩된 평가 말뭉치와 seed별 마스킹 배치."""

    name: str
    encodings: List[Encoding]
    masked: Dict[int, List[MaskedBatch]] = field(default_factory=dict)

    @property
    def seeds(self) -> List[int]:
        return list(self.masked)


@dataclass(frozen=True)
class MaskedStats:
    nll_sum: float
    masked_count: int
    correct: int
    sentence_log_ppl: tuple = ()

    @property
    def log_perplexity(self) -> float:
        return self.nll_sum / self.masked_count

    @property
    def accuracy(self) -> float:
        """Percentage of masked tokens whose argmax equals the original token."""
        return 100.0 * self.correct / self.masked_count

    @property
    def sentence_mean_log_perplexity(self) -> float:
        return sum(self.sentence_log_ppl) / len(self.sentence_log_ppl)


def _sentences(corpus) -> List[str]:
    if hasattr(corpus, 'iter_sentences'):
        return list(corpus.iter_sentences())
    return list(corpus)


def prepare_eval_set(
    name: str,
    corpus,
    vocab: Vocabulary,
    config: EvalConfig,
    max_len: Optional[int] = None,
) -> EvalSet:
    encodings = encode_texts(_sentences(corpus), vocab, max_len or config.max_len)
    if not encodings:
        raise EvaluationError(f"evaluation corpus '{name}' is empty", details={'dataset': name})
    masked = {
        seed: mask_encodings(encodings, config, seed, vocab, batch_size=config.batch_size)
        for seed in config.seeds
    }
    return EvalSet(name=name, encodings=encodings, masked=masked)


def masked_statistics(model: MaskedLanguageModel, batches: Sequence[MaskedBatch]) -> MaskedStats:
    """
    마스킹된 위치에서 NLL 합, 정답 수, 문장별 평균 NLL을 모읍니다.

    모델은 eval 모드로 실행되고 호출 전 모드로 되돌아갑니다.
    """
    was_training = model.training
    model.eval()
    nll_sum = 0.0
    masked_count = 0
    correct = 0
    sentence_log_ppl = []
    with torch.no_grad():
        for batch in batches:
            output = model(batch.input_ids, batch.segment_ids, batch.attention_mask)
            nll = token_nll(output.logits, batch.labels)
            positions = batch.mask_positions
            predictions = output.logits.argmax(dim=-1)

            nll_sum += nll[positions].sum().item()
            masked_count += int(positions.sum())
            correct += int((predictions[positions] == batch.labels[positions]).sum())
            per_row = positions.sum(dim=1)
            sentence_log_ppl.extend((nll.sum(dim=1) / per_row.clamp(min=1)).tolist())
    model.train(was_training)
    if masked_count == 0:
        raise EvaluationError('no masked positions to evaluate')
    return MaskedStats(nll_sum, masked_count, correct, tuple(sentence_log_ppl))


def _repeat_stats(model, corpus, config: EvalConfig, vocab: Vocabulary, eval_set: EvalSet = None) -> List[MaskedStats]:
    check_vocab_compat(model.config, vocab)
    if eval_set is None:
        max_len = min(config.max_len, model.config.max_position)
        eval_set = prepare_eval_set(getattr(corpus, 'name', 'corpus'), corpus, vocab, config, max_len=max_len)
    return [masked_statistics(model, eval_set.masked[seed]) for seed in config.seeds]


def log_perplexity(model, corpus, config: EvalConfig, vocab: Vocabulary, eval_set: EvalSet = None) -> List[float]:
    """Natural-log perplexity, one value per repeat."""
    stats = _repeat_stats(model, corpus, config, vocab, eval_set)
    if config.per_sentence:
        return [s.sentence_mean_log_perplexity for s in stats]
    return [s.log_perplexity for s in stats]


def mlm_accuracy(model, corpus, config: EvalConfig, vocab: Vocabulary, eval_set: EvalSet = None) -> List[float]:
    return [s.accuracy for s in _repeat_stats(model, corpus, config, vocab, eval_set)]


def stray_on_encodings(
    current: MaskedLanguageModel,
    base: MaskedLanguageModel,
    encodings: Sequence[Encoding],
    vocab: Vocabulary,
    layer: int = -1,
    batch_size: int = 32,
) -> float:
    if not encodings:
        raise EvaluationError('cannot measure stray on an empty corpus')
    modes = (current.training, base.training)
    current.eval()
    base.eval()
    total = 0.0
    with torch.no_grad():
        for start in range(0, len(encodings), batch_size):
            batch = collate([unmasked_batch(e) for e in encodings[start:start + batch_size]], pad_id=vocab.pad_id)
            current_out = current(batch.input_ids, batch.segment_ids, batch.attention_mask)
            base_out = base(batch.input_ids, batch.segment_ids, batch.attention_mask)
            total += representation_distances(current_out, base_out, batch, layer).sum().item()
    current.train(modes[0])
    base.train(modes[1])
    return total / len(encodings)


def representation_stray(
    current: MaskedLanguageModel,
    base: MaskedLanguageModel,
    corpus,
    vocab: Vocabulary,
    layer: int = -1,
    max_len: int = 128,
    batch_size: int = 32,
) -> float:
    """Mean over sentences of the squared representation distance on unmasked inputs."""
    check_vocab_compat(current.config, vocab)
    check_vocab_compat(base.config, vocab)
    max_len = min(max_len, current.config.max_position, base.config.max_position)
    encodings = encode_texts(_sentences(corpus), vocab, max_len)
    return stray_on_encodings(current, base, encodings, vocab, layer=layer, batch_size=batch_size)


def evaluate_models(
    models: Dict[str, MaskedLanguageModel],
    datasets: Dict[str, object],
    config: EvalConfig,
    vocab: Vocabulary,
):
    """
    모든 모델을 같은 마스킹 입력으로 평가합니다.

    Returns:
        EvalReport: (모델, 데이터셋)마다 행 하나, 반복별 값 포함
    """
    from .reports import EvalReport, ReportRow

    if not models:
        raise EvaluationError('no models to evaluate')
    if not datasets:
        raise EvaluationError('no datasets to evaluate')
    for model in models.values():
        check_vocab_compat(model.config, vocab)

    max_len = min([config.max_len] + [m.config.max_position for m in models.values()])
    eval_sets = {name: prepare_eval_set(name, corpus, vocab, config, max_len=max_len) for name, corpus in datasets.items()}

    rows = []
    for model_name, model in models.items():
        for dataset, eval_set in eval_sets.items():
            stats = [masked_statistics(model, eval_set.masked[seed]) for seed in config.seeds]
            for seed, s in zip(config.seeds, stats):
                logger.info(
                    f"evaluated {model_name} on {dataset} (seed {seed})",
                    extra={'log_perplexity': s.log_perplexity, 'accuracy': s.accuracy, 'masked': s.masked_count},
                )
            perplexities = [
                s.sentence_mean_log_perplexity if config.per_sentence else s.log_perplexity for s in stats
            ]
            rows.append(ReportRow(
                model=model_name,
                dataset=dataset,
                perplexity_repeats=tuple(perplexities),
                accuracy_repeats=tuple(s.accuracy for s in stats),
                vocab_size=model.config.vocab_size,
            ))
    return EvalReport(
        rows=tuple(rows),
        seeds=tuple(config.seeds),
        normalization='sentence' if config.per_sentence else 'token',
    )
