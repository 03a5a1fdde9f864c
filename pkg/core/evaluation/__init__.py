"""
MLM 평가: log-perplexity, 정확도, 표현 이탈, λ sweep, 보고서와 곡선.
"""
from .config import EvalConfig
from .metrics import (
    EvalSet,
    MaskedStats,
    prepare_eval_set,
    masked_statistics,
    log_perplexity,
    mlm_accuracy,
    representation_stray,
    stray_on_encodings,
    evaluate_models,
)
from .reports import ReportRow, EvalReport, REPORT_FORMATS, CSV_COLUMNS, render_report, emit_report
from .curves import CurvePoint, CurveRecorder, plot_curves, last_quartile_slope
from .sweep import SweepRow, SweepTable, parse_lambda_grid, sweep_lambda, render_sweep, emit_sweep
from .exceptions import EvaluationError, ReportError

__all__ = [
    'EvalConfig',
    'EvalSet',
    'MaskedStats',
    'prepare_eval_set',
    'masked_statistics',
    'log_perplexity',
    'mlm_accuracy',
    'representation_stray',
    'stray_on_encodings',
    'evaluate_models',
    'ReportRow',
    'EvalReport',
    'REPORT_FORMATS',
    'CSV_COLUMNS',
    'render_report',
    'emit_report',
    'CurvePoint',
    'CurveRecorder',
    'plot_curves',
    'last_quartile_slope',
    'SweepRow',
    'SweepTable',
    'parse_lambda_grid',
    'sweep_lambda',
    'render_sweep',
    'emit_sweep',
    'EvaluationError',
    'ReportError',
]
