"""
λ sweep: one continued-pretraining run per regularization weight, all from the same base and seed.
"""
import csv
import io
import json
import logging
from dataclasses import dataclass, field
from decimal import Decimal, InvalidOperation
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

from core.error_handling.exceptions import ValidationError
from core.model.checkpoint import load_checkpoint
from core.model.encoder import MaskedLanguageModel
from core.tokenizer.vocab import Vocabulary
from core.training.config import TrainConfig
from core.training.trainer import train

from .config import EvalConfig
from .curves import CurveRecorder, plot_curves
from .metrics import masked_statistics, prepare_eval_set
from .reports import REPORT_FORMATS, fmt3, mean, render_table, write_text

logger = logging.getLogger(__name__)

STATUS_OK = 'ok'
STATUS_FAILED = 'failed'
SWEEP_CSV_COLUMNS = ('lambda', 'dataset', 'perplexity', 'accuracy', 'status')


def _grid_error(spec: str, reason: str) -> ValidationError:
    return ValidationError(f"Invalid lambda grid '{spec}': {reason}", field_errors={'lambdas': [reason]})


def parse_lambda_grid(spec: str) -> List[float]:
    """
    ``start:stop:step`` (stop 포함) 또는 쉼표로 구분한 목록을 λ 리스트로 바꿉니다.

    >>> parse_lambda_grid('0.1:0.3:0.1')
    [0.1, 0.2, 0.3]
    """
    try:
        if ':' in spec:
            parts = [Decimal(p) for p in spec.split(':')]
            if len(parts) != 3:
                raise _grid_error(spec, 'expected start:stop:step')
            start, stop, step = parts
            if step <= 0:
                raise _grid_error(spec, 'step must be positive')
            values = []
            current = start
            while current <= stop:
                values.append(current)
                current += step
        else:
            values = [Decimal(p) for p in spec.split(',') if p.strip()]
    except InvalidOperation:
        raise _grid_error(spec, 'not a number')
    if not values:
        raise _grid_error(spec, 'grid is empty')
    if any(v < 0 for v in values):
        raise _grid_error(spec, 'lambda must be >= 0')
    return [float(v) for v in values]


def lambda_label(value: float) -> str:
    return f"{value:g}"


@dataclass(frozen=True)
class SweepRow:
    reg_lambda: float
    status: str = STATUS_OK
    error: Optional[str] = None
    perplexity: Dict[str, float] = field(default_factory=dict)
    accuracy: Dict[str, float] = field(default_factory=dict)
    final_stray: Optional[float] = None

    @property
    def ok(self) -> bool:
        return self.status == STATUS_OK

    @property
    def average_perplexity(self) -> Optional[float]:
        return mean(list(self.perplexity.values())) if self.ok and self.perplexity else None

    @property
    def average_accuracy(self) -> Optional[float]:
        return mean(list(self.accuracy.values())) if self.ok and self.accuracy else None

    def to_dict(self) -> Dict[str, Any]:
        return {
            'lambda': self.reg_lambda,
            'status': self.status,
            'error': self.error,
            'perplexity': dict(self.perplexity),
            'accuracy': dict(self.accuracy),
            'average_perplexity': self.average_perplexity,
            'average_accuracy': self.average_accuracy,
            'final_stray': self.final_stray,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'SweepRow':
        return cls(
            reg_lambda=float(data['lambda']),
            status=data.get('status', STATUS_OK),
            error=data.get('error'),
            perplexity=dict(data.get('perplexity', {})),
            accuracy=dict(data.get('accuracy', {})),
            final_stray=data.get('final_stray'),
        )


@dataclass(frozen=True)
class SweepTable:
    """λ별 데이터셋 log-perplexity/정확도 표. 평균이 가장 좋은 λ를 표시합니다."""

    rows: Tuple[SweepRow, ...]
    datasets: Tuple[str, ...]
    seeds: Tuple[int, ...] = ()

    def _ok_rows(self) -> List[SweepRow]:
        return [row for row in self.rows if row.ok and row.perplexity]

    @property
    def best_perplexity(self) -> Optional[float]:
        """λ with the lowest average log-perplexity."""
        rows = self._ok_rows()
        return min(rows, key=lambda r: (r.average_perplexity, r.reg_lambda)).reg_lambda if rows else None

    @property
    def best_accuracy(self) -> Optional[float]:
        rows = self._ok_rows()
        return min(rows, key=lambda r: (-r.average_accuracy, r.reg_lambda)).reg_lambda if rows else None

    @property
    def failures(self) -> List[SweepRow]:
        return [row for row in self.rows if not row.ok]

    def to_dict(self) -> Dict[str, Any]:
        return {
            'datasets': list(self.datasets),
            'seeds': list(self.seeds),
            'rows': [row.to_dict() for row in self.rows],
            'best_perplexity': self.best_perplexity,
            'best_accuracy': self.best_accuracy,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'SweepTable':
        return cls(
            rows=tuple(SweepRow.from_dict(row) for row in data['rows']),
            datasets=tuple(data['datasets']),
            seeds=tuple(data.get('seeds', ())),
        )


def _sweep_table_text(table: SweepTable) -> List[List[str]]:
    header = ['lambda']
    for dataset in table.datasets:
        header += [f"{dataset} ppl", f"{dataset} acc"]
    header += ['average ppl', 'average acc', 'final l2', 'status']
    lines = [header]
    for row in table.rows:
        line = [lambda_label(row.reg_lambda)]
        for dataset in table.datasets:
            line += [fmt3(row.perplexity.get(dataset)), fmt3(row.accuracy.get(dataset))]
        ppl = fmt3(row.average_perplexity)
        acc = fmt3(row.average_accuracy)
        if row.ok and row.reg_lambda == table.best_perplexity:
            ppl += '*'
        if row.ok and row.reg_lambda == table.best_accuracy:
            acc += '*'
        line += [ppl, acc, fmt3(row.final_stray), row.status if row.ok else f"{row.status}: {row.error}"]
        lines.append(line)
    return lines


def render_sweep(table: SweepTable, fmt: str = 'table-text') -> str:
    if fmt == 'table-text':
        return render_table(
            'hanlm lambda sweep',
            _sweep_table_text(table),
            table.seeds,
            notes=['* marks the best average log-perplexity (lowest) and accuracy (highest)',
                   'final l2: cross-lingual l2 of the last logged training step'],
        )
    if fmt == 'json':
        return json.dumps(table.to_dict(), indent=2, ensure_ascii=False) + '\n'
    if fmt == 'csv':
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator='\n')
        writer.writerow(SWEEP_CSV_COLUMNS)
        for row in table.rows:
            for dataset in table.datasets:
                writer.writerow([
                    lambda_label(row.reg_lambda),
                    dataset,
                    repr(row.perplexity[dataset]) if dataset in row.perplexity else '',
                    repr(row.accuracy[dataset]) if dataset in row.accuracy else '',
                    row.status,
                ])
        return buffer.getvalue()
    raise ValidationError(f"Unknown report format: {fmt}", field_errors={'format': [f"choose from {REPORT_FORMATS}"]})


def emit_sweep(table: SweepTable, fmt: str, path: Union[str, Path]) -> Path:
    path = write_text(render_sweep(table, fmt), path)
    logger.info(f"Sweep table written: {path}", extra={'format': fmt, 'rows': len(table.rows)})
    return path


def sweep_lambda(
    grid: Sequence[float],
    base_model: Union[MaskedLanguageModel, str, Path],
    vocab: Vocabulary,
    train_corpus,
    eval_datasets: Dict[str, object],
    train_config: TrainConfig,
    eval_config: EvalConfig,
    out_dir: Union[str, Path, None] = None,
    progress: bool = False,
) -> SweepTable:
    """
    λ마다 같은 기준 모델과 seed로 학습하고 모든 평가 데이터셋에서 평가합니다.

    한 λ의 실패는 표에 기록하고 다음 λ로 넘어갑니다.
    out_dir가 있으면 λ별 학습 결과(lambda-<λ>/)와 stray 곡선(stray_curves.csv/png)을 씁니다.
    """
    if any(value < 0 for value in grid):
        raise ValidationError('lambda must be >= 0', field_errors={'lambdas': ['lambda must be >= 0']})
    if not isinstance(base_model, MaskedLanguageModel):
        _, base_model = load_checkpoint(base_model)

    out_dir = Path(out_dir) if out_dir else None
    max_len = min(eval_config.max_len, base_model.config.max_position)
    eval_sets = [prepare_eval_set(name, corpus, vocab, eval_config, max_len=max_len) for name, corpus in eval_datasets.items()]
    curves = CurveRecorder()

    rows = []
    for value in grid:
        label = lambda_label(value)
        run_dir = out_dir / f"lambda-{label}" if out_dir else None
        try:
            result = train(train_corpus, base_model, train_config.replace(reg_lambda=value), vocab,
                           out_dir=run_dir, progress=progress)
            perplexity, accuracy = {}, {}
            for eval_set in eval_sets:
                stats = [masked_statistics(result.model, eval_set.masked[seed]) for seed in eval_config.seeds]
                if eval_config.per_sentence:
                    perplexity[eval_set.name] = mean([s.sentence_mean_log_perplexity for s in stats])
                else:
                    perplexity[eval_set.name] = mean([s.log_perplexity for s in stats])
                accuracy[eval_set.name] = mean([s.accuracy for s in stats])
            for step, l2 in result.log.series('cross_lingual_l2'):
                curves.add(step, f"lambda={label}", l2)
            row = SweepRow(value, perplexity=perplexity, accuracy=accuracy,
                           final_stray=result.log.final('cross_lingual_l2'))
            logger.info(f"sweep lambda={label} finished",
                        extra={'perplexity': perplexity, 'accuracy': accuracy})
        except Exception as e:
            logger.error(f"sweep lambda={label} failed: {e}", extra={'lambda': value})
            row = SweepRow(value, status=STATUS_FAILED, error=str(e))
        rows.append(row)

    table = SweepTable(rows=tuple(rows), datasets=tuple(eval_datasets), seeds=tuple(eval_config.seeds))
    if out_dir and len(curves):
        curves.write_csv(out_dir / 'stray_curves.csv')
        plot_curves(curves, out_dir / 'stray_curves.png', title='cross-lingual l2 by lambda', ylabel='l2')
    return table
