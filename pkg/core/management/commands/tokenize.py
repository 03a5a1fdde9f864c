"""
Tokenize text or a corpus with a vocabulary.
"""
import json

from django.core.management.base import CommandError, CommandParser

from core.management.base import HanlmCommand
from core.tokenizer.encoding import WordPieceTokenizer


class Command(HanlmCommand):
    help = 'Tokenize a sentence or a corpus and report the [UNK] rate'

    def add_arguments(self, parser: CommandParser):
        parser.add_argument('--vocab', required=True, help='Vocabulary file')
        parser.add_argument('--text', help='A single sentence')
        parser.add_argument('--input', help='Corpus (.jsonl)')
        parser.add_argument('--out', help='Write one JSON line per sentence (tokens and ids)')

    def handle(self, *args, **options):
        if bool(options['text']) == bool(options['input']):
            raise CommandError('give exactly one of --text or --input')
        tokenizer = WordPieceTokenizer(self.read_vocab(options['vocab']))
        vocab = tokenizer.vocab

        sentences = [options['text']] if options['text'] else self.read_corpus(options['input']).sentences()
        lines = []
        for sentence in sentences:
            ids = tokenizer.tokenize(sentence).token_ids
            tokens = vocab.convert_ids_to_tokens(ids)
            lines.append(json.dumps({'text': sentence, 'tokens': tokens, 'ids': ids}, ensure_ascii=False))
            if options['text']:
                self.stdout.write(' '.join(tokens))

        if options['out']:
            out = self.output_path(options['out'])
            out.parent.mkdir(parents=True, exist_ok=True)
            with open(out, 'w', encoding='utf-8', newline='\n') as f:
                f.write(''.join(line + '\n' for line in lines))
            self.record_output(out)
        self.stdout.write(f"[UNK] rate: {100 * tokenizer.unk_rate(sentences):.3f}% of words")
