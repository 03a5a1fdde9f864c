"""
Write the bundled synthetic corpora.
"""
from django.core.management.base import CommandParser

from core.corpus.documents import write_jsonl
from core.corpus.synthetic import LANGUAGES, synthesize_corpus
from core.management.base import HanlmCommand


class Command(HanlmCommand):
    help = 'Generate the seeded synthetic corpora (language_a, language_b, language_c)'

    def add_arguments(self, parser: CommandParser):
        parser.add_argument('--out', required=True, help='Output directory')
        parser.add_argument('--languages', default=','.join(LANGUAGES), help='Comma-separated subset')
        parser.add_argument('--documents', type=int, default=200)
        parser.add_argument('--sentences', type=int, default=5, help='Sentences per document')
        parser.add_argument('--seed', type=int, default=0)

    def handle(self, *args, **options):
        out_dir = self.output_path(options['out'])
        self.record_seed(options['seed'])
        self.record_config('synthesize', {
            'languages': options['languages'],
            'documents': options['documents'],
            'sentences': options['sentences'],
        })
        for language in [name.strip() for name in options['languages'].split(',') if name.strip()]:
            corpus = synthesize_corpus(language, options['documents'], options['sentences'], options['seed'])
            path = write_jsonl(corpus, out_dir / f"{language}.jsonl")
            self.record_output(path)
            self.stdout.write(f"{language}: {corpus.sentence_count} sentences -> {path}")
        self.success('Synthetic corpora written')
