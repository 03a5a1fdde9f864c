"""
Evaluation reports and their text/JSON/CSV serializations.

표 형식(table-text)은 소수점 셋째 자리까지 반올림합니다. JSON과 CSV는 반올림하지 않습니다.
같은 입력은 항상 같은 바이트열을 만듭니다.
"""
import csv
import io
import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

from core.error_handling.exceptions import FileSystemError, ValidationError

from .templates import TemplateManager

logger = logging.getLogger(__name__)

REPORT_FORMATS = ('table-text', 'json', 'csv')
CSV_COLUMNS = ('model', 'dataset', 'perplexity', 'accuracy', 'repeat')
NORMALIZATION_LABELS = {
    'token': 'masked token',
    'sentence': 'sentence (mean of per-sentence averages)',
}


def mean(values: Sequence[float]) -> float:
    return sum(values) / len(values)


def fmt3(value: Optional[float]) -> str:
    return '-' if value is None else f"{value:.3f}"


@dataclass(frozen=True)
class ReportRow:
    model: str
    dataset: str
    perplexity_repeats: Tuple[float, ...]
    accuracy_repeats: Tuple[float, ...]
    vocab_size: int

    @property
    def perplexity(self) -> float:
        return mean(self.perplexity_repeats)

    @property
    def accuracy(self) -> float:
        return mean(self.accuracy_repeats)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'model': self.model,
            'dataset': self.dataset,
            'vocab_size': self.vocab_size,
            'perplexity': self.perplexity,
            'accuracy': self.accuracy,
            'perplexity_repeats': list(self.perplexity_repeats),
            'accuracy_repeats': list(self.accuracy_repeats),
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'ReportRow':
        return cls(
            model=data['model'],
            dataset=data['dataset'],
            perplexity_repeats=tuple(data['perplexity_repeats']),
            accuracy_repeats=tuple(data['accuracy_repeats']),
            vocab_size=int(data['vocab_size']),
        )


@dataclass(frozen=True)
class EvalReport:
    """
    (모델, 데이터셋)별 평가 결과.

    모델별 평균은 데이터셋별 평균값의 산술평균입니다. 정확도는 백분율(0~100)입니다.
    """

    rows: Tuple[ReportRow, ...]
    seeds: Tuple[int, ...] = ()
    log_base: str = 'e'
    normalization: str = 'token'

    def __post_init__(self):
        object.__setattr__(self, 'rows', tuple(self.rows))
        object.__setattr__(self, 'seeds', tuple(self.seeds))
        errors = {}
        for row in self.rows:
            if any(not 0 <= a <= 100 for a in row.accuracy_repeats):
                errors.setdefault('accuracy', []).append(f"{row.model}/{row.dataset} outside [0, 100]")
        if errors:
            raise ValidationError('Invalid evaluation report', field_errors=errors)

    @property
    def models(self) -> List[str]:
        return list(dict.fromkeys(row.model for row in self.rows))

    @property
    def datasets(self) -> List[str]:
        return list(dict.fromkeys(row.dataset for row in self.rows))

    def row(self, model: str, dataset: str) -> Optional[ReportRow]:
        for row in self.rows:
            if row.model == model and row.dataset == dataset:
                return row
        return None

    def average(self, model: str, metric: str) -> float:
        """metric: 'perplexity' 또는 'accuracy'"""
        return mean([getattr(row, metric) for row in self.rows if row.model == model])

    def vocab_size(self, model: str) -> int:
        return next(row.vocab_size for row in self.rows if row.model == model)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'log_base': self.log_base,
            'normalization': self.normalization,
            'seeds': list(self.seeds),
            'rows': [row.to_dict() for row in self.rows],
            'averages': {
                model: {
                    'perplexity': self.average(model, 'perplexity'),
                    'accuracy': self.average(model, 'accuracy'),
                }
                for model in self.models
            },
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'EvalReport':
        return cls(
            rows=tuple(ReportRow.from_dict(row) for row in data['rows']),
            seeds=tuple(data.get('seeds', ())),
            log_base=data.get('log_base', 'e'),
            normalization=data.get('normalization', 'token'),
        )

    @classmethod
    def load(cls, path: Union[str, Path]) -> 'EvalReport':
        with open(path, 'r', encoding='utf-8') as f:
            return cls.from_dict(json.load(f))


def _column_widths(table: List[List[str]]) -> List[int]:
    return [max(len(row[i]) for row in table) for i in range(len(table[0]))]


def render_table(title: str, table: List[List[str]], seeds, log_base='e', normalization='token', notes=()) -> str:
    return TemplateManager().render_template_file('report.txt.j2', {
        'title': title,
        'log_base': log_base,
        'normalization': NORMALIZATION_LABELS.get(normalization, normalization),
        'seeds': list(seeds),
        'notes': list(notes),
        'table': table,
        'widths': _column_widths(table),
    })


def _report_table(report: EvalReport) -> List[List[str]]:
    datasets = report.datasets
    header = ['model', 'vocab']
    for dataset in datasets:
        header += [f"{dataset} ppl", f"{dataset} acc"]
    header += ['average ppl', 'average acc']
    table = [header]
    for model in report.models:
        line = [model, str(report.vocab_size(model))]
        for dataset in datasets:
            row = report.row(model, dataset)
            line += [fmt3(row.perplexity if row else None), fmt3(row.accuracy if row else None)]
        line += [fmt3(report.average(model, 'perplexity')), fmt3(report.average(model, 'accuracy'))]
        table.append(line)
    return table


def _report_csv(report: EvalReport) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator='\n')
    writer.writerow(CSV_COLUMNS)
    for row in report.rows:
        for repeat, (ppl, acc) in enumerate(zip(row.perplexity_repeats, row.accuracy_repeats), start=1):
            writer.writerow([row.model, row.dataset, repr(ppl), repr(acc), repeat])
    return buffer.getvalue()


def render_report(report: EvalReport, fmt: str = 'table-text') -> str:
    if fmt == 'table-text':
        return render_table('hanlm MLM evaluation', _report_table(report), report.seeds,
                            report.log_base, report.normalization)
    if fmt == 'json':
        return json.dumps(report.to_dict(), indent=2, ensure_ascii=False) + '\n'
    if fmt == 'csv':
        return _report_csv(report)
    raise ValidationError(f"Unknown report format: {fmt}", field_errors={'format': [f"choose from {REPORT_FORMATS}"]})


def write_text(text: str, path: Union[str, Path]) -> Path:
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, 'w', encoding='utf-8', newline='\n') as f:
            f.write(text)
    except OSError as e:
        raise FileSystemError(f"Cannot write {path}: {e.strerror or e}", file_path=path, operation='write') from e
    return path


def emit_report(report: EvalReport, fmt: str, path: Union[str, Path]) -> Path:
    """Serialize ``report`` as table-text, json or csv into ``path``."""
    path = write_text(render_report(report, fmt), path)
    logger.info(f"Report written: {path}", extra={'format': fmt, 'rows': len(report.rows)})
    return path
