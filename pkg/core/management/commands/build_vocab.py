"""
Build a WordPiece vocabulary from one or more corpora.
"""
from django.core.management.base import CommandParser

from core.corpus.documents import Corpus
from core.management.base import HanlmCommand
from core.tokenizer.wordpiece import build_vocab


class Command(HanlmCommand):
    help = 'Build a WordPiece vocabulary'

    def add_arguments(self, parser: CommandParser):
        parser.add_argument('--input', required=True, action='append', help='Corpus (.jsonl); repeatable')
        parser.add_argument('--size', type=int, default=2000, help='Target vocabulary size (default: 2000)')
        parser.add_argument('--min-frequency', type=int, default=1, help='Minimum pair/character count')
        parser.add_argument('--out', required=True, help='Vocabulary file')

    def handle(self, *args, **options):
        documents = []
        for path in options['input']:
            documents.extend(self.read_corpus(path).documents)
        corpus = Corpus(tuple(documents))

        vocab = build_vocab(corpus, options['size'], min_frequency=options['min_frequency'])
        self.record_config('vocab', {'size': options['size'], 'min_frequency': options['min_frequency']})
        out = vocab.save(self.output_path(options['out']))
        self.record_output(out)
        self.success(f"{len(vocab)} tokens -> {out}")
