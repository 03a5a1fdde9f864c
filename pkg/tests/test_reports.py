"""
보고서, λ sweep 표, 학습 곡선 테스트.
"""
import csv
import io
import json
from unittest.mock import patch

import pytest
from django.test import SimpleTestCase

from core.corpus import Corpus
from core.evaluation import (
    CSV_COLUMNS,
    CurveRecorder,
    EvalConfig,
    EvalReport,
    ReportError,
    ReportRow,
    SweepRow,
    SweepTable,
    emit_report,
    last_quartile_slope,
    parse_lambda_grid,
    plot_curves,
    render_report,
    render_sweep,
    sweep_lambda,
)
from core.evaluation.sweep import STATUS_FAILED
from core.evaluation.templates import TemplateManager
from core.error_handling.exceptions import FileSystemError, ValidationError
from core.training import TrainConfig, TrainingDivergedError, train


def sample_report() -> EvalReport:
    return EvalReport(
        rows=(
            ReportRow('base', 'rodong', (2.5, 2.7), (40.0, 42.0), 2000),
            ReportRow('base', 'newyear', (3.0, 3.2), (30.0, 32.0), 2000),
            ReportRow('tuned', 'rodong', (2.0, 2.2), (50.0, 52.0), 2000),
            ReportRow('tuned', 'newyear', (3.1, 3.3), (29.0, 31.0), 2000),
        ),
        seeds=(0, 1),
    )


class TestEvalReport(SimpleTestCase):
    """평가 보고서"""

    def test_averages(self):
        report = sample_report()
        self.assertAlmostEqual(report.row('base', 'rodong').perplexity, 2.6)
        self.assertAlmostEqual(report.average('tuned', 'accuracy'), 40.5)
        self.assertEqual(report.models, ['base', 'tuned'])
        self.assertIsNone(report.row('base', 'missing'))

    def test_accuracy_must_be_percentage(self):
        with self.assertRaises(ValidationError):
            EvalReport(rows=(ReportRow('m', 'd', (1.0,), (101.0,), 10),))

    def test_single_row_report(self):
        report = EvalReport(rows=(ReportRow('m', 'd', (1.0,), (50.0,), 10),), seeds=(0,))
        text = render_report(report, 'table-text')
        self.assertIn('1.000', text)
        self.assertIn('50.000', text)

    def test_table_text(self):
        lines = render_report(sample_report(), 'table-text').splitlines()
        self.assertEqual(lines[0], '# hanlm MLM evaluation')
        self.assertIn('natural log', lines[1])
        self.assertIn('seeds: 0, 1', lines[3])
        header = next(line for line in lines if line.startswith('model'))
        self.assertEqual(header.split('  ')[0], 'model')
        self.assertIn('rodong ppl', header)
        base = next(line for line in lines if line.startswith('base'))
        self.assertIn('2.600', base)
        self.assertIn('41.000', base)
        self.assertTrue(all(line == line.rstrip() for line in lines))

    def test_json_round_trip_and_averages(self):
        text = render_report(sample_report(), 'json')
        data = json.loads(text)
        self.assertEqual(data['log_base'], 'e')
        self.assertEqual(data['rows'][0]['perplexity_repeats'], [2.5, 2.7])
        self.assertIn('tuned', data['averages'])
        self.assertEqual(EvalReport.from_dict(data), sample_report())

    def test_csv_has_one_line_per_repeat(self):
        rows = list(csv.reader(io.StringIO(render_report(sample_report(), 'csv'))))
        self.assertEqual(tuple(rows[0]), CSV_COLUMNS)
        self.assertEqual(len(rows), 1 + 4 * 2)
        self.assertEqual(rows[1], ['base', 'rodong', '2.5', '40.0', '1'])

    def test_same_input_same_bytes(self):
        for fmt in ('table-text', 'json', 'csv'):
            self.assertEqual(render_report(sample_report(), fmt), render_report(sample_report(), fmt))

    def test_unknown_format(self):
        with self.assertRaises(ValidationError):
            render_report(sample_report(), 'xml')


def test_emit_report(tmp_path):
    path = emit_report(sample_report(), 'json', tmp_path / 'nested' / 'report.json')
    assert EvalReport.load(path) == sample_report()


def test_emit_report_unwritable(tmp_path):
    blocker = tmp_path / 'blocker'
    blocker.write_text('', encoding='utf-8')
    with pytest.raises(FileSystemError) as ctx:
        emit_report(sample_report(), 'csv', blocker / 'report.csv')
    assert ctx.value.operation == 'write'


class TestTemplates(SimpleTestCase):
    def test_missing_template(self):
        with self.assertRaises(ReportError):
            TemplateManager().render_template_file('nope.j2', {})

    def test_missing_variable(self):
        with self.assertRaises(ReportError):
            TemplateManager().render_template_file('report.txt.j2', {'title': 'x'})

    def test_lists_report_template(self):
        self.assertIn('report.txt.j2', TemplateManager().list_templates())


class TestLambdaGrid(SimpleTestCase):
    """λ 격자 파싱"""

    def test_range_is_inclusive(self):
        grid = parse_lambda_grid('0.1:1.0:0.1')
        self.assertEqual(len(grid), 10)
        self.assertEqual(grid[0], 0.1)
        self.assertEqual(grid[-1], 1.0)
        self.assertEqual(grid[2], 0.3)

    def test_list(self):
        self.assertEqual(parse_lambda_grid('0, 0.5,2'), [0.0, 0.5, 2.0])

    def test_invalid(self):
        for spec in ('a:b:c', '1:0', '0:1:0', '1:0:0.1', '-1,2', ''):
            with self.assertRaises(ValidationError, msg=spec):
                parse_lambda_grid(spec)


def sample_sweep() -> SweepTable:
    return SweepTable(
        rows=(
            SweepRow(0.0, perplexity={'a': 3.0, 'b': 2.0}, accuracy={'a': 40.0, 'b': 45.0}, final_stray=1.0),
            SweepRow(0.5, perplexity={'a': 2.0, 'b': 2.2}, accuracy={'a': 38.0, 'b': 44.0}, final_stray=0.4),
            SweepRow(1.0, status=STATUS_FAILED, error='diverged'),
        ),
        datasets=('a', 'b'),
        seeds=(0,),
    )


class TestSweepTable(SimpleTestCase):
    """λ sweep 표"""

    def test_best_values(self):
        table = sample_sweep()
        self.assertEqual(table.best_perplexity, 0.5)
        self.assertEqual(table.best_accuracy, 0.0)
        self.assertEqual([row.reg_lambda for row in table.failures], [1.0])

    def test_text_marks_best_and_failures(self):
        text = render_sweep(sample_sweep(), 'table-text')
        line = next(l for l in text.splitlines() if l.startswith('0.5 '))
        self.assertIn('2.100*', line)
        self.assertIn('failed: diverged', text)

    def test_json_round_trip(self):
        data = json.loads(render_sweep(sample_sweep(), 'json'))
        self.assertEqual(data['best_perplexity'], 0.5)
        self.assertEqual(SweepTable.from_dict(data), sample_sweep())

    def test_csv(self):
        rows = list(csv.reader(io.StringIO(render_sweep(sample_sweep(), 'csv'))))
        self.assertEqual(rows[0], ['lambda', 'dataset', 'perplexity', 'accuracy', 'status'])
        self.assertEqual(rows[-1], ['1', 'b', '', '', 'failed'])


class TestSweepLambda:
    """λ sweep 실행"""

    def test_runs_every_lambda(self, tmp_path, tiny_model, tiny_vocab, tiny_corpus):
        held_out = Corpus.from_sentences(['우리는 가요.'])
        config = TrainConfig(epochs=1, batch_size=2, learning_rate=1e-3, warmup_ratio=0.0)

        table = sweep_lambda([0.0, 1.0], tiny_model, tiny_vocab, tiny_corpus, {'held_out': held_out},
                             config, EvalConfig(repeats=1), out_dir=tmp_path)

        assert [row.reg_lambda for row in table.rows] == [0.0, 1.0]
        assert all(row.ok for row in table.rows)
        assert set(table.rows[0].perplexity) == {'held_out'}
        assert (tmp_path / 'lambda-0' / 'model.safetensors').is_file()
        assert (tmp_path / 'lambda-1' / 'model.safetensors').is_file()
        assert (tmp_path / 'stray_curves.csv').is_file()
        assert (tmp_path / 'stray_curves.png').read_bytes()[:4] == b'\x89PNG'

    def test_ten_lambdas_on_two_datasets(self, tiny_model, tiny_vocab, tiny_corpus):
        grid = parse_lambda_grid('0.1:1.0:0.1')
        datasets = {
            'rodong': tiny_corpus,
            'newyear': Corpus.from_sentences(['우리는 가요.', '나는 간다.']),
        }
        config = TrainConfig(epochs=1, batch_size=2, learning_rate=1e-3, warmup_ratio=0.0)

        table = sweep_lambda(grid, tiny_model, tiny_vocab, tiny_corpus, datasets, config, EvalConfig(repeats=1))

        assert len(grid) == 10
        assert [row.reg_lambda for row in table.rows] == grid
        assert table.datasets == ('rodong', 'newyear')
        for row in table.rows:
            assert row.ok
            assert set(row.perplexity) == set(row.accuracy) == {'rodong', 'newyear'}
            assert row.average_perplexity == pytest.approx(sum(row.perplexity.values()) / 2)
            assert row.average_accuracy == pytest.approx(sum(row.accuracy.values()) / 2)
            assert row.final_stray is not None
        assert table.best_perplexity in grid
        assert table.best_accuracy in grid

        rows = list(csv.reader(io.StringIO(render_sweep(table, 'csv'))))
        assert len(rows) == 1 + 10 * 2

    def test_failure_is_recorded_and_sweep_continues(self, tiny_model, tiny_vocab, tiny_corpus):
        def flaky(corpus, base, config, vocab, **kwargs):
            if config.reg_lambda == 0.5:
                raise TrainingDivergedError('Training diverged at step 1 (loss is nan)', step=1)
            return train(corpus, base, config, vocab, **kwargs)

        config = TrainConfig(epochs=1, batch_size=4, warmup_ratio=0.0)
        with patch('core.evaluation.sweep.train', side_effect=flaky):
            table = sweep_lambda([0.0, 0.5, 1.0], tiny_model, tiny_vocab, tiny_corpus, {'tiny': tiny_corpus},
                                 config, EvalConfig(repeats=1))

        assert [row.status for row in table.rows] == ['ok', 'failed', 'ok']
        assert 'diverged' in table.rows[1].error
        assert table.best_perplexity in (0.0, 1.0)

    def test_negative_lambda(self, tiny_model, tiny_vocab, tiny_corpus):
        with pytest.raises(ValidationError):
            sweep_lambda([-0.1], tiny_model, tiny_vocab, tiny_corpus, {'tiny': tiny_corpus},
                         TrainConfig(), EvalConfig(repeats=1))


class TestCurves:
    """학습 곡선"""

    def test_csv_round_trip(self, tmp_path):
        recorder = CurveRecorder()
        recorder.add(0, 'a/stray', 0.0)
        recorder.add(2, 'a/stray', 0.25)
        recorder.add(2, 'a/accuracy', 50.0)

        path = recorder.write_csv(tmp_path / 'curves.csv')
        restored = CurveRecorder.read_csv(path)

        assert restored.points == recorder.points
        assert restored.series_names() == ['a/stray', 'a/accuracy']
        assert restored.series('a/stray') == [(0, 0.0), (2, 0.25)]

    def test_from_train_log(self, tiny_model, tiny_vocab, tiny_corpus):
        result = train(tiny_corpus, tiny_model, TrainConfig(epochs=1, batch_size=2, warmup_ratio=0.0), tiny_vocab)
        recorder = CurveRecorder.from_train_log(result.log)
        assert len(recorder.series('total_loss')) == len(result.log)

    def test_plot_is_png(self, tmp_path):
        recorder = CurveRecorder()
        for step in range(5):
            recorder.add(step, 'loss', 1.0 / (step + 1))
        path = plot_curves(recorder, tmp_path / 'loss.png', title='loss')
        assert path.read_bytes()[:8] == b'\x89PNG\r\n\x1a\n'

    def test_last_quartile_slope(self):
        assert last_quartile_slope([10, 5, 2, 1, 1, 1, 1, 1]) == 0.0
        assert last_quartile_slope([1, 2, 3, 4]) == pytest.approx(0.25)
        assert last_quartile_slope([3]) == 0.0
