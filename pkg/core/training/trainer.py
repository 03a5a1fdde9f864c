"""
Continued pretraining loop.

매 단계: 마스킹 -> 현재 모델 forward(train) -> 기준 모델 forward(eval, no grad)
-> total_loss -> backward -> gradient clipping -> AdamW step.
단일 작업자 모드에서 같은 설정과 seed는 같은 TrainLog를 만듭니다.
"""
import copy
import datetime
import json
import logging
import math
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Union

import torch
from torch.optim import AdamW
from torch.optim.lr_scheduler import LambdaLR
from tqdm import tqdm

from core.model.checkpoint import check_vocab_compat, load_checkpoint, save_checkpoint
from core.model.config import ModelConfig
from core.model.encoder import ForwardOutput, MaskedLanguageModel, init_params, parameter_fingerprint
from core.tokenizer.encoding import Encoding, encode_texts
from core.tokenizer.vocab import Vocabulary

from .config import TrainConfig
from .exceptions import TrainingDivergedError, TrainingError
from .losses import mlm_loss, representation_distances, total_loss, weight_penalty
from .masking import MaskedBatch, collate, mask_sentence

logger = logging.getLogger(__name__)

TRAIN_LOG_NAME = 'train_log.jsonl'
FINAL_MODEL_NAME = 'model.safetensors'


class BaseSnapshot:
    """
    학습 시작 시점 모델(f₀)의 고정 사본.

    항상 eval 모드이며 기울기를 계산하지 않습니다.
    """

    def __init__(self, model: MaskedLanguageModel):
        self.model = copy.deepcopy(model)
        self.model.eval()
        for param in self.model.parameters():
            param.requires_grad_(False)
        self.fingerprint = parameter_fingerprint(self.model)

    def forward(self, batch: MaskedBatch) -> ForwardOutput:
        self.model.eval()
        with torch.no_grad():
            return self.model(batch.input_ids, batch.segment_ids, batch.attention_mask)

    __call__ = forward

    @property
    def parameters(self) -> Dict[str, torch.Tensor]:
        return dict(self.model.named_parameters())

    def verify(self) -> bool:
        return parameter_fingerprint(self.model) == self.fingerprint


@dataclass
class TrainLogRecord:
    step: int
    epoch: int
    mlm_loss: float
    penalty: float
    total_loss: float
    cross_lingual_l2: float
    lr: float
    timestamp: Optional[str] = None


class TrainLog:
    """JSON lines log, one record per logging interval."""

    def __init__(self, path: Union[str, Path, None] = None):
        self.path = Path(path) if path else None
        self.records: List[TrainLogRecord] = []
        if self.path:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            self.path.write_text('', encoding='utf-8')

    def append(self, record: TrainLogRecord) -> None:
        self.records.append(record)
        if self.path:
            with open(self.path, 'a', encoding='utf-8', newline='\n') as f:
                f.write(json.dumps(asdict(record)) + '\n')

    def __len__(self):
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    def series(self, name: str) -> List[tuple]:
        return [(record.step, getattr(record, name)) for record in self.records]

    def final(self, name: str) -> Optional[float]:
        return getattr(self.records[-1], name) if self.records else None

    def epoch_means(self, name: str) -> Dict[int, float]:
        grouped: Dict[int, List[float]] = {}
        for record in self.records:
            grouped.setdefault(record.epoch, []).append(getattr(record, name))
        return {epoch: sum(values) / len(values) for epoch, values in grouped.items()}

    def dumps(self) -> str:
        return ''.join(json.dumps(asdict(record)) + '\n' for record in self.records)

    @classmethod
    def load(cls, path: Union[str, Path]) -> 'TrainLog':
        log = cls()
        with open(path, 'r', encoding='utf-8') as f:
            for line in f:
                if line.strip():
                    log.records.append(TrainLogRecord(**json.loads(line)))
        return log


class TrainerCallback:
    """학습 루프 훅. 필요한 메서드만 재정의합니다."""

    def on_train_begin(self, trainer: 'ContinuedPretrainer') -> None:
        pass

    def on_step_end(self, trainer: 'ContinuedPretrainer', record: TrainLogRecord) -> None:
        pass

    def on_epoch_end(self, trainer: 'ContinuedPretrainer', epoch: int) -> None:
        pass

    def on_train_end(self, trainer: 'ContinuedPretrainer') -> None:
        pass


@dataclass
class TrainResult:
    model: MaskedLanguageModel
    log: TrainLog
    base_fingerprint: str
    epochs_completed: int
    final_checkpoint: Optional[Path] = None


def linear_warmup_decay(total_steps: int, warmup_steps: int):
    def factor(step: int) -> float:
        if warmup_steps and step < warmup_steps:
            return (step + 1) / warmup_steps
        remaining = total_steps - step
        return max(0.0, remaining / max(1, total_steps - warmup_steps))
    return factor


class ContinuedPretrainer:
    """
    현재 모델을 계속 사전학습시킵니다.

    Args:
        model: 학습할 모델 (제자리에서 갱신됨)
        vocab: 모델과 크기가 같은 어휘 집합
        config: TrainConfig
        base: 기준 모델. 없으면 model의 현재 상태로 만듭니다.
        callbacks: TrainerCallback 목록
        out_dir: TrainLog와 주기적 체크포인트를 쓸 디렉토리 (없으면 메모리에만 기록)
    """

    def __init__(
        self,
        model: MaskedLanguageModel,
        vocab: Vocabulary,
        config: TrainConfig,
        base: BaseSnapshot = None,
        callbacks: Sequence[TrainerCallback] = (),
        out_dir: Union[str, Path, None] = None,
        progress: bool = False,
    ):
        check_vocab_compat(model.config, vocab)
        self.model = model
        self.vocab = vocab
        self.config = config
        self.base = base or BaseSnapshot(model)
        self.callbacks = list(callbacks)
        self.out_dir = Path(out_dir) if out_dir else None
        self.progress = progress
        self.log = TrainLog(self.out_dir / TRAIN_LOG_NAME if self.out_dir else None)
        self.global_step = 0
        self.total_steps = 0
        self.last_checkpoint: Optional[Path] = None

    @property
    def max_len(self) -> int:
        return min(self.config.max_len, self.model.config.max_position)

    def encode(self, sentences: Iterable[str]) -> List[Encoding]:
        return encode_texts(list(sentences), self.vocab, self.max_len)

    def _callback(self, hook: str, *args) -> None:
        for callback in self.callbacks:
            getattr(callback, hook)(self, *args)

    def _checkpoint(self, name: str, epoch: int) -> Optional[Path]:
        if not self.out_dir:
            return None
        path = save_checkpoint(
            self.model,
            self.out_dir / 'checkpoints' / name,
            metadata={'step': self.global_step, 'epoch': epoch, 'lambda': self.config.reg_lambda},
        )
        self.last_checkpoint = path
        return path

    def _diverged(self, epoch: int, reason: str) -> None:
        # 아직 optimizer.step 전이므로 현재 파라미터가 마지막 정상 상태입니다
        path = self._checkpoint('last_good.safetensors', epoch) or self.last_checkpoint
        logger.error(f"Training diverged at step {self.global_step}: {reason}",
                     extra={'step': self.global_step, 'epoch': epoch, 'last_checkpoint': str(path)})
        raise TrainingDivergedError(
            f"Training diverged at step {self.global_step} ({reason})",
            step=self.global_step,
            last_checkpoint=path,
        )

    def _batches(self, encodings: List[Encoding], generator: torch.Generator) -> Iterable[MaskedBatch]:
        order = torch.randperm(len(encodings), generator=generator).tolist()
        size = self.config.batch_size
        for start in range(0, len(order), size):
            masked = [
                mask_sentence(encodings[i], self.config, generator, self.vocab, max_len=self.max_len)
                for i in order[start:start + size]
            ]
            yield collate(masked, pad_id=self.vocab.pad_id)

    def train(self, corpus) -> TrainResult:
        """corpus: Corpus 또는 문장 목록."""
        sentences = corpus.iter_sentences() if hasattr(corpus, 'iter_sentences') else corpus
        encodings = self.encode(sentences)
        if not encodings and self.config.epochs:
            raise TrainingError('training corpus is empty')

        config = self.config
        torch.manual_seed(config.seed)
        generator = torch.Generator().manual_seed(config.seed)

        steps_per_epoch = math.ceil(len(encodings) / config.batch_size)
        total_steps = steps_per_epoch * config.epochs
        warmup_steps = int(total_steps * config.warmup_ratio)
        self.total_steps = total_steps

        optimizer = AdamW(self.model.parameters(), lr=config.learning_rate, weight_decay=config.weight_decay)
        scheduler = LambdaLR(optimizer, linear_warmup_decay(total_steps, warmup_steps))

        logger.info(
            'Training started',
            extra={'sentences': len(encodings), 'epochs': config.epochs, 'steps': total_steps,
                   'lambda': config.reg_lambda, 'regularizer': config.regularizer},
        )
        self._callback('on_train_begin')

        epochs_completed = 0
        with tqdm(total=total_steps, disable=not self.progress, desc='train', unit='step') as bar:
            for epoch in range(1, config.epochs + 1):
                for batch in self._batches(encodings, generator):
                    record = self._step(batch, epoch, optimizer, scheduler)
                    bar.update(1)
                    if record is not None:
                        bar.set_postfix(loss=f"{record.total_loss:.3f}")
                epochs_completed = epoch
                self._callback('on_epoch_end', epoch)
                if epoch % config.checkpoint_every == 0 or epoch == config.epochs:
                    self._checkpoint(f"epoch-{epoch:03d}.safetensors", epoch)

        self.model.eval()
        if not self.base.verify():
            raise TrainingError('base snapshot changed during training')

        final = None
        if self.out_dir:
            final = save_checkpoint(
                self.model,
                self.out_dir / FINAL_MODEL_NAME,
                metadata={'step': self.global_step, 'epoch': epochs_completed, 'lambda': config.reg_lambda},
            )
        self._callback('on_train_end')
        logger.info('Training finished', extra={'steps': self.global_step, 'final_l2': self.log.final('cross_lingual_l2')})
        return TrainResult(self.model, self.log, self.base.fingerprint, epochs_completed, final)

    def _step(self, batch: MaskedBatch, epoch: int, optimizer, scheduler) -> Optional[TrainLogRecord]:
        config = self.config
        self.model.train()
        current = self.model(batch.input_ids, batch.segment_ids, batch.attention_mask)
        base = self.base.forward(batch)

        mlm = mlm_loss(current, batch)
        distances = representation_distances(current, base, batch, config.representation_layer)
        if config.regularizer == 'weights':
            penalty = weight_penalty(self.model, self.base.parameters)
        else:
            penalty = distances.mean()
        loss = total_loss(mlm, penalty, config.reg_lambda)

        if not torch.isfinite(loss):
            self._diverged(epoch, f"loss is {loss.item()}")

        optimizer.zero_grad(set_to_none=True)
        loss.backward()
        parameters = [p for p in self.model.parameters() if p.requires_grad]
        if config.max_grad_norm > 0:
            grad_norm = torch.nn.utils.clip_grad_norm_(parameters, config.max_grad_norm)
        else:
            grad_norm = torch.linalg.vector_norm(torch.stack([
                torch.linalg.vector_norm(p.grad) for p in parameters if p.grad is not None
            ]))
        if not torch.isfinite(grad_norm):
            self._diverged(epoch, 'gradient is not finite')

        lr = optimizer.param_groups[0]['lr']
        optimizer.step()
        scheduler.step()
        self.global_step += 1

        if self.global_step % config.log_interval and self.global_step != self.total_steps:
            return None

        record = TrainLogRecord(
            step=self.global_step,
            epoch=epoch,
            mlm_loss=mlm.item(),
            penalty=penalty.item(),
            total_loss=loss.item(),
            cross_lingual_l2=distances.detach().clamp(min=0).sqrt().mean().item(),
            lr=lr,
            timestamp=datetime.datetime.now(datetime.timezone.utc).isoformat() if config.log_wallclock else None,
        )
        self.log.append(record)
        logger.info(
            f"step {record.step} epoch {epoch} loss {record.total_loss:.4f}",
            extra={'mlm_loss': record.mlm_loss, 'penalty': record.penalty, 'cross_lingual_l2': record.cross_lingual_l2},
        )
        self._callback('on_step_end', record)
        return record


def train(
    corpus,
    base_checkpoint: Union[str, Path, MaskedLanguageModel, None],
    config: TrainConfig,
    vocab: Vocabulary,
    callbacks: Sequence[TrainerCallback] = (),
    out_dir: Union[str, Path, None] = None,
    model_config: ModelConfig = None,
    progress: bool = False,
) -> TrainResult:
    """
    기준 체크포인트에서 시작해 학습합니다.

    base_checkpoint가 None이면 model_config와 config.seed로 새 모델을 초기화합니다
    (합성 언어 A로 기준 모델을 사전학습할 때 사용).
    """
    if base_checkpoint is None:
        model_config = model_config or ModelConfig.desk_scale(vocab_size=len(vocab))
        model = init_params(model_config, config.seed)
    elif isinstance(base_checkpoint, MaskedLanguageModel):
        model = copy.deepcopy(base_checkpoint)
    else:
        _, model = load_checkpoint(base_checkpoint)

    trainer = ContinuedPretrainer(model, vocab, config, callbacks=callbacks, out_dir=out_dir, progress=progress)
    return trainer.train(corpus)
