"""
List corpus syllables that no vocabulary entry contains.
"""
from django.core.management.base import CommandParser

from core.hangul.novel import find_novel_syllables
from core.hangul.syllables import jamo_of
from core.management.base import HanlmCommand


class Command(HanlmCommand):
    help = 'Find syllables of a corpus that are missing from a vocabulary'

    def add_arguments(self, parser: CommandParser):
        parser.add_argument('--input', required=True, help='Corpus (.jsonl)')
        parser.add_argument('--vocab', required=True, help='Vocabulary file')
        parser.add_argument('--limit', type=int, help='Show only the most frequent N')
        parser.add_argument('--out', help='Write syllable<TAB>frequency lines to this file')

    def handle(self, *args, **options):
        corpus = self.read_corpus(options['input'])
        vocab = self.read_vocab(options['vocab'])
        novel = find_novel_syllables(corpus, vocab)
        shown = novel[:options['limit']] if options['limit'] else novel

        for syllable, frequency in shown:
            self.stdout.write(f"{syllable}\t{'+'.join(jamo_of(syllable))}\t{frequency}")

        if options['out']:
            out = self.output_path(options['out'])
            out.parent.mkdir(parents=True, exist_ok=True)
            out.write_text(''.join(f"{s}\t{f}\n" for s, f in novel), encoding='utf-8')
            self.record_output(out)
        self.success(f"{len(novel)} novel syllables")
