"""
λ sweep: train one model per λ from the same base and compare them.
"""
from django.core.management.base import CommandParser

from core.configuration import resolve_config
from core.evaluation.sweep import emit_sweep, parse_lambda_grid, render_sweep, sweep_lambda
from core.management.base import HanlmCommand, parse_named_paths
from core.management.commands.evaluate import add_eval_arguments, resolve_eval_config
from core.management.commands.train import add_train_arguments, train_flags
from core.training.config import TrainConfig

SWEEP_TABLE_NAMES = {'table-text': 'sweep.txt', 'json': 'sweep.json', 'csv': 'sweep.csv'}


class Command(HanlmCommand):
    help = 'Train and evaluate one model per regularization weight'

    def add_arguments(self, parser: CommandParser):
        parser.add_argument('--base', required=True, help='Base checkpoint')
        parser.add_argument('--vocab', required=True, help='Vocabulary file')
        parser.add_argument('--corpus', required=True, help='Training corpus (.jsonl)')
        parser.add_argument('--lambdas', required=True, help="Grid 'start:stop:step' (inclusive) or '0,0.5,1'")
        parser.add_argument('--out', required=True, help='Output directory')
        self.add_config_argument(parser)
        add_train_arguments(parser)
        add_eval_arguments(parser)

    def handle(self, *args, **options):
        grid = parse_lambda_grid(options['lambdas'])
        file_config = self.load_config(options)
        train_config = resolve_config(TrainConfig, file_config['train'], train_flags(options))
        eval_config = resolve_eval_config(file_config['eval'], options)
        self.record_config('train', train_config)
        self.record_config('eval', eval_config)
        self.record_config('sweep', {'lambdas': grid})
        self.record_seed(train_config.seed)

        vocab = self.read_vocab(options['vocab'])
        _, base = self.read_checkpoint(options['base'])
        corpus = self.read_corpus(options['corpus'])
        datasets = {name: self.read_corpus(path) for name, path in parse_named_paths(options['corpora']).items()}
        out_dir = self.output_path(options['out'])

        table = sweep_lambda(grid, base, vocab, corpus, datasets, train_config, eval_config,
                             out_dir=out_dir, progress=options['progress'])

        out = emit_sweep(table, options['format'], out_dir / SWEEP_TABLE_NAMES[options['format']])
        self.record_output(out)
        for name in ('stray_curves.csv', 'stray_curves.png'):
            if (out_dir / name).exists():
                self.record_output(out_dir / name)
        self.stdout.write(render_sweep(table, 'table-text'))
        if table.failures:
            self.stderr.write(f"{len(table.failures)} of {len(table.rows)} runs failed")
        self.success(f"Sweep table -> {out}")
