"""
Trainer callbacks.
"""
import logging
from typing import Dict, List

from .trainer import ContinuedPretrainer, TrainerCallback

logger = logging.getLogger(__name__)


class ValidationCurveCallback(TrainerCallback):
    """
    에폭마다 검증 말뭉치별 MLM 정확도, log-perplexity, 표현 이탈(stray)을 기록합니다.

    마스킹은 학습 시작 시 한 번 만들어 모든 에폭에서 같은 입력을 씁니다.
    series 이름: ``{dataset}/accuracy``, ``{dataset}/log_perplexity``, ``{dataset}/stray``
    """

    def __init__(self, datasets: Dict[str, object], eval_config=None, recorder=None, record_start: bool = True):
        from core.evaluation.config import EvalConfig
        from core.evaluation.curves import CurveRecorder

        self.datasets = datasets
        self.eval_config = eval_config or EvalConfig(repeats=1)
        self.recorder = recorder if recorder is not None else CurveRecorder()
        self.record_start = record_start
        self._eval_sets: List = []

    def on_train_begin(self, trainer: ContinuedPretrainer) -> None:
        from core.evaluation.metrics import prepare_eval_set

        self._eval_sets = [
            prepare_eval_set(name, corpus, trainer.vocab, self.eval_config, max_len=trainer.max_len)
            for name, corpus in self.datasets.items()
        ]
        if self.record_start:
            self._record(trainer, step=0)

    def on_epoch_end(self, trainer: ContinuedPretrainer, epoch: int) -> None:
        self._record(trainer, step=trainer.global_step)

    def _record(self, trainer: ContinuedPretrainer, step: int) -> None:
        from core.evaluation.metrics import masked_statistics, stray_on_encodings

        for eval_set in self._eval_sets:
            stats = [masked_statistics(trainer.model, batches) for batches in eval_set.masked.values()]
            accuracy = sum(s.accuracy for s in stats) / len(stats)
            log_ppl = sum(s.log_perplexity for s in stats) / len(stats)
            stray = stray_on_encodings(trainer.model, trainer.base.model, eval_set.encodings, trainer.vocab)
            self.recorder.add(step, f"{eval_set.name}/accuracy", accuracy)
            self.recorder.add(step, f"{eval_set.name}/log_perplexity", log_ppl)
            self.recorder.add(step, f"{eval_set.name}/stray", stray)
            logger.info(
                f"validation {eval_set.name} at step {step}",
                extra={'accuracy': accuracy, 'log_perplexity': log_ppl, 'stray': stray},
            )
