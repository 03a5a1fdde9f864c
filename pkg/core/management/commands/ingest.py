"""
Ingest JSON lines, article HTML or NLI TSV into the JSON lines corpus format.
"""
from pathlib import Path

from django.core.management.base import CommandError, CommandParser

from core.corpus.documents import write_jsonl
from core.corpus.extraction import ExtractionRules, ingest_html_dir
from core.corpus.fetcher import ArticleFetcher
from core.corpus.nli import nli_to_corpus, read_nli_tsv
from core.corpus.splits import split_corpus
from core.management.base import HanlmCommand


class Command(HanlmCommand):
    help = 'Ingest a corpus (jsonl, html directory or NLI TSV) into JSON lines'

    def add_arguments(self, parser: CommandParser):
        parser.add_argument('--format', choices=['jsonl', 'html', 'nli'], default='jsonl', help='Input format')
        parser.add_argument('--input', required=True, help='Input file, or directory of HTML files')
        parser.add_argument('--out', required=True, help='Output corpus (.jsonl)')
        parser.add_argument('--rules', help='Extraction rules (JSON/YAML) for --format html')
        parser.add_argument('--urls', help='URL list to fetch into --input before HTML extraction')
        parser.add_argument('--delay', type=float, help='Seconds between fetch requests')
        parser.add_argument('--split', choices=['train', 'dev', 'test'], help='NLI split label when the TSV has none')
        parser.add_argument('--workers', type=int, help='Extraction worker threads')
        parser.add_argument('--train-fraction', type=float, help='Also write <out>.train.jsonl / <out>.valid.jsonl')
        parser.add_argument('--seed', type=int, default=0, help='Seed for the train/validation split')

    def handle(self, *args, **options):
        fmt = options['format']
        if fmt == 'jsonl':
            corpus = self.read_corpus(options['input'])
        elif fmt == 'html':
            corpus = self._ingest_html(options)
        else:
            self.record_input(options['input'])
            corpus = nli_to_corpus(read_nli_tsv(options['input'], split=options['split']))

        out = write_jsonl(corpus, self.output_path(options['out']))
        self.record_output(out)
        self.success(f"{len(corpus)} documents, {corpus.sentence_count} sentences -> {out}")

        if options['train_fraction'] is not None:
            self.record_seed(options['seed'])
            train, valid = split_corpus(corpus, options['train_fraction'], options['seed'])
            for name, part in (('train', train), ('valid', valid)):
                path = write_jsonl(part, out.with_suffix(f".{name}.jsonl"))
                self.record_output(path)
                self.stdout.write(f"{name}: {len(part)} documents -> {path}")

    def _ingest_html(self, options):
        if not options['rules']:
            raise CommandError('--rules is required for --format html')
        self.record_input(options['rules'])
        rules = ExtractionRules.load(options['rules'])
        directory = Path(options['input'])

        if options['urls']:
            self.record_input(options['urls'])
            urls = [line.strip() for line in Path(options['urls']).read_text(encoding='utf-8').splitlines()]
            fetcher = ArticleFetcher(directory, delay=options['delay'])
            try:
                result = fetcher.fetch_all(url for url in urls if url and not url.startswith('#'))
            finally:
                fetcher.close()
            self.stdout.write(
                f"fetched {len(result.fetched)}, skipped {len(result.skipped)}, failed {len(result.failed)}"
            )
            for error in result.failed:
                self.stderr.write(str(error))

        self.record_input(directory)
        corpus = ingest_html_dir(directory, rules, workers=options['workers'])
        if corpus.report:
            self.stderr.write(corpus.report.summary())
        return corpus
