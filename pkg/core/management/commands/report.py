"""
Re-render a saved JSON report or sweep table, or plot curve CSV files.
"""
import json

from django.core.management.base import CommandError, CommandParser

from core.evaluation.curves import CurveRecorder, plot_curves
from core.evaluation.reports import REPORT_FORMATS, EvalReport, emit_report
from core.evaluation.sweep import SweepTable, emit_sweep
from core.management.base import HanlmCommand


class Command(HanlmCommand):
    help = 'Convert a JSON report/sweep table to table-text, json or csv; or plot a curve CSV'

    def add_arguments(self, parser: CommandParser):
        parser.add_argument('--input', help='JSON report or sweep table')
        parser.add_argument('--format', choices=REPORT_FORMATS, default='table-text')
        parser.add_argument('--out', help='Output file')
        parser.add_argument('--curves', help='Curve CSV (step,series,value) to plot')
        parser.add_argument('--series', action='append', help='Series to plot; repeatable (default: all)')
        parser.add_argument('--plot', help='PNG output for --curves')
        parser.add_argument('--title', default='')

    def handle(self, *args, **options):
        if not options['input'] and not options['curves']:
            raise CommandError('give --input and/or --curves')

        if options['input']:
            if not options['out']:
                raise CommandError('--out is required with --input')
            self.record_input(options['input'])
            with open(options['input'], 'r', encoding='utf-8') as f:
                data = json.load(f)
            out = self.output_path(options['out'])
            if 'best_perplexity' in data:
                out = emit_sweep(SweepTable.from_dict(data), options['format'], out)
            else:
                out = emit_report(EvalReport.from_dict(data), options['format'], out)
            self.record_output(out)
            self.success(f"Report -> {out}")

        if options['curves']:
            if not options['plot']:
                raise CommandError('--plot is required with --curves')
            self.record_input(options['curves'])
            recorder = CurveRecorder.read_csv(options['curves'])
            out = plot_curves(recorder, self.output_path(options['plot']), series=options['series'],
                              title=options['title'])
            self.record_output(out)
            self.success(f"Plot -> {out}")
