"""
Evaluate checkpoints on corpora (log-perplexity and MLM accuracy with repeated masking).
"""
from django.core.management.base import CommandParser

from core.configuration import resolve_config
from core.evaluation.config import EvalConfig
from core.evaluation.metrics import evaluate_models
from core.evaluation.reports import REPORT_FORMATS, emit_report, render_report
from core.management.base import HanlmCommand, parse_int_list, parse_named_paths

REPORT_SUFFIXES = {'table-text': '.txt', 'json': '.json', 'csv': '.csv'}


def add_eval_arguments(parser: CommandParser) -> None:
    parser.add_argument('--corpora', required=True, nargs='+', metavar='NAME=PATH', help='Evaluation corpora')
    parser.add_argument('--repeats', type=int, help='Masking repeats (default: 3)')
    parser.add_argument('--seeds', help='Comma-separated masking seeds, one per repeat')
    parser.add_argument('--eval-mask-prob', dest='eval_mask_probability', type=float)
    parser.add_argument('--per-sentence', action='store_true', default=None,
                        help='Average log-perplexity per sentence instead of per masked token')
    parser.add_argument('--format', choices=REPORT_FORMATS, default='json')


def eval_flags(options) -> dict:
    seeds = parse_int_list(options.get('seeds'))
    repeats = options.get('repeats')
    if seeds is not None and repeats is None:
        repeats = len(seeds)
    return {
        'repeats': repeats,
        'seeds': seeds,
        'mask_probability': options.get('eval_mask_probability'),
        'per_sentence': options.get('per_sentence'),
    }


def resolve_eval_config(file_section, options) -> EvalConfig:
    flags = eval_flags(options)
    section = dict(file_section or {})
    # repeats만 바꾸면 seeds는 새 repeats에 맞춰 다시 만듭니다
    if flags['repeats'] is not None and flags['seeds'] is None:
        section.pop('seeds', None)
    return resolve_config(EvalConfig, section, flags)


class Command(HanlmCommand):
    help = 'Evaluate one or more checkpoints on named corpora'

    def add_arguments(self, parser: CommandParser):
        parser.add_argument('--model', required=True, action='append', metavar='[NAME=]PATH',
                            help='Checkpoint; repeatable for paired comparison')
        parser.add_argument('--vocab', required=True, help='Vocabulary file')
        parser.add_argument('--out', required=True, help='Report file')
        self.add_config_argument(parser)
        add_eval_arguments(parser)

    def handle(self, *args, **options):
        file_config = self.load_config(options)
        config = resolve_eval_config(file_config['eval'], options)
        self.record_config('eval', config)
        self.record_seed(config.seeds[0])

        vocab = self.read_vocab(options['vocab'])
        models = {name: self.read_checkpoint(path)[1] for name, path in parse_named_paths(options['model']).items()}
        datasets = {name: self.read_corpus(path) for name, path in parse_named_paths(options['corpora']).items()}

        report = evaluate_models(models, datasets, config, vocab)
        out = emit_report(report, options['format'], self.output_path(options['out']))
        self.record_output(out)
        self.stdout.write(render_report(report, 'table-text'))
        self.success(f"Report -> {out}")
