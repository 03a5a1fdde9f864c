"""
Apply a syllable map to a corpus.
"""
from django.core.management.base import CommandParser

from core.corpus.documents import write_jsonl
from core.hangul.mapping import SyllableMap, apply_map_to_corpus
from core.management.base import HanlmCommand


class Command(HanlmCommand):
    help = 'Rewrite syllables of a corpus with a syllable map (default: the bundled table)'

    def add_arguments(self, parser: CommandParser):
        parser.add_argument('--input', required=True, help='Input corpus (.jsonl)')
        parser.add_argument('--out', required=True, help='Output corpus (.jsonl)')
        parser.add_argument('--map', dest='map_path', help='Syllable map TSV (syllable<TAB>replacement)')

    def handle(self, *args, **options):
        if options['map_path']:
            self.record_input(options['map_path'])
            syllable_map = SyllableMap.load(options['map_path'])
        else:
            syllable_map = SyllableMap.default()

        corpus = self.read_corpus(options['input'])
        mapped = apply_map_to_corpus(corpus, syllable_map)
        out = write_jsonl(mapped, self.output_path(options['out']))
        self.record_output(out)
        self.success(f"Applied {len(syllable_map)} mappings to {corpus.sentence_count} sentences -> {out}")
