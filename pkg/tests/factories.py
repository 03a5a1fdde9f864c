"""
Test object factories.
"""
import factory
from faker import Faker

from core.corpus.documents import Corpus, Document, SourceTag
from core.corpus.nli import NliRecord, NliSplit

fake = Faker('ko_KR')


class DocumentFactory(factory.Factory):
    class Meta:
        model = Document

    id = factory.Sequence(lambda n: f"doc-{n:05d}")
    title = factory.LazyFunction(lambda: fake.sentence(nb_words=3))
    date = factory.LazyFunction(lambda: fake.date_between(start_date='-10y').isoformat())
    sentences = factory.LazyFunction(lambda: tuple(fake.sentence(nb_words=5) for _ in range(3)))
    source_tag = SourceTag.RODONG


class NliRecordFactory(factory.Factory):
    class Meta:
        model = NliRecord

    premise = factory.LazyFunction(lambda: fake.sentence(nb_words=6))
    hypothesis = factory.LazyFunction(lambda: fake.sentence(nb_words=4))
    split = NliSplit.TRAIN


def make_corpus(size: int = 5, **kwargs) -> Corpus:
    return Corpus(tuple(DocumentFactory.build_batch(size, **kwargs)))
