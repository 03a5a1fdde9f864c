"""
Continued pretraining (or pretraining from scratch when --base is omitted).
"""
from django.core.management.base import CommandParser

from core.configuration import resolve_config
from core.evaluation.curves import CurveRecorder, plot_curves
from core.management.base import HanlmCommand, parse_named_paths
from core.model.config import ModelConfig
from core.training.callbacks import ValidationCurveCallback
from core.training.config import MASKING_SCHEMES, REGULARIZERS, TrainConfig
from core.training.trainer import train

# 명령행 플래그 -> TrainConfig 필드
TRAIN_FLAGS = (
    'reg_lambda', 'mask_probability', 'learning_rate', 'batch_size', 'epochs', 'seed', 'masking_scheme',
    'regularizer', 'representation_layer', 'warmup_ratio', 'weight_decay', 'max_grad_norm', 'max_len',
    'log_interval', 'checkpoint_every',
)


def add_train_arguments(parser: CommandParser) -> None:
    parser.add_argument('--lambda', dest='reg_lambda', type=float, help='Regularization weight')
    parser.add_argument('--mask-prob', dest='mask_probability', type=float)
    parser.add_argument('--lr', dest='learning_rate', type=float)
    parser.add_argument('--batch-size', type=int)
    parser.add_argument('--epochs', type=int)
    parser.add_argument('--seed', type=int)
    parser.add_argument('--masking-scheme', choices=MASKING_SCHEMES)
    parser.add_argument('--regularizer', choices=REGULARIZERS)
    parser.add_argument('--representation-layer', type=int)
    parser.add_argument('--warmup-ratio', type=float)
    parser.add_argument('--weight-decay', type=float)
    parser.add_argument('--max-grad-norm', type=float)
    parser.add_argument('--max-len', type=int)
    parser.add_argument('--log-interval', type=int)
    parser.add_argument('--checkpoint-every', type=int)
    parser.add_argument('--progress', action='store_true', help='Show a progress bar')


def train_flags(options) -> dict:
    return {name: options.get(name) for name in TRAIN_FLAGS}


class Command(HanlmCommand):
    help = 'Continue pretraining a checkpoint on a corpus with the cross-lingual regularizer'

    def add_arguments(self, parser: CommandParser):
        parser.add_argument('--corpus', required=True, help='Training corpus (.jsonl)')
        parser.add_argument('--vocab', required=True, help='Vocabulary file')
        parser.add_argument('--base', help='Base checkpoint; omitted = fresh model from --seed')
        parser.add_argument('--out', required=True, help='Output directory')
        parser.add_argument('--validate', action='append', metavar='NAME=PATH',
                            help='Validation corpus for per-epoch curves; repeatable')
        self.add_config_argument(parser)
        add_train_arguments(parser)

    def handle(self, *args, **options):
        file_config = self.load_config(options)
        config = resolve_config(TrainConfig, file_config['train'], train_flags(options))
        self.record_config('train', config)
        self.record_seed(config.seed)

        vocab = self.read_vocab(options['vocab'])
        corpus = self.read_corpus(options['corpus'])
        out_dir = self.output_path(options['out'])

        model_config = None
        base = options['base']
        if base:
            _, base = self.read_checkpoint(base)
            self.record_config('model', base.config)
        else:
            model_config = resolve_config(
                ModelConfig,
                file_config['model'],
                {'vocab_size': len(vocab)},
                defaults=ModelConfig.desk_scale(len(vocab)).to_dict(),
            )
            self.record_config('model', model_config)

        callbacks = []
        validation = parse_named_paths(options['validate'])
        if validation:
            datasets = {name: self.read_corpus(path) for name, path in validation.items()}
            callbacks.append(ValidationCurveCallback(datasets))

        result = train(corpus, base, config, vocab, callbacks=callbacks, out_dir=out_dir,
                       model_config=model_config, progress=options['progress'])

        curves = CurveRecorder.from_train_log(result.log)
        for callback in callbacks:
            for point in callback.recorder.points:
                curves.add(point.step, point.series, point.value)
        self.record_output(result.final_checkpoint)
        self.record_output(result.log.path)
        self.record_output(curves.write_csv(out_dir / 'curves.csv'))
        self.record_output(plot_curves(curves, out_dir / 'loss.png',
                                       series=['mlm_loss', 'total_loss'], title='training loss', ylabel='loss'))
        self.record_output(plot_curves(curves, out_dir / 'stray.png', series=['cross_lingual_l2'],
                                       title='cross-lingual l2', ylabel='l2'))

        final_loss = result.log.final('total_loss')
        self.success(
            f"{result.epochs_completed} epochs, final loss "
            f"{'-' if final_loss is None else f'{final_loss:.4f}'} -> {result.final_checkpoint}"
        )
