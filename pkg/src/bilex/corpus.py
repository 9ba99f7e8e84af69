"""Monolingual corpus loading, filtering and vocabulary indexing.

Corpora arrive pre-tokenized and pre-lemmatized: one sentence per line,
tokens separated by spaces, blank lines separating documents. Loading
removes stop words and tokens without a single alphabetic character, so
everything downstream (window counting, association statistics) sees
only content lemmas.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Iterator

from .errors import DataError

Sentence = list  # list[str]
Document = list  # list[Sentence]


def _keep(token: str, stopwords) -> bool:
    # A token survives if it is not a stop word and carries at least one
    # alphabetic character (Unicode-aware, so Persian/Italian lemmas pass).
    return token not in stopwords and any(ch.isalpha() for ch in token)


@dataclass
class Corpus:
    """A filtered corpus: documents of sentences of lemma tokens.

    ``token_count`` is the total number of surviving tokens and doubles as
    the corpus size N used by the log-likelihood statistic. ``frequencies``
    counts every surviving token once per occurrence.
    """

    language_tag: str
    documents: list  # document -> sentences -> tokens
    token_count: int
    frequencies: Counter = field(repr=False)

    def sentences(self) -> Iterator[Sentence]:
        for doc in self.documents:
            for sent in doc:
                yield sent

    @classmethod
    def from_documents(cls, documents: Iterable[Iterable[Iterable[str]]],
                       language_tag: str = "",
                       stopwords=frozenset()) -> "Corpus":
        """Build a corpus from in-memory documents, applying the token filter."""
        docs = []
        freq: Counter = Counter()
        for document in documents:
            doc = []
            for sentence in document:
                tokens = [t for t in sentence if _keep(t, stopwords)]
                if tokens:
                    doc.append(tokens)
                    freq.update(tokens)
            if doc:
                docs.append(doc)
        total = sum(freq.values())
        if total == 0:
            raise DataError(f"empty corpus ({language_tag or 'unnamed'}): "
                            "no tokens survived filtering")
        return cls(language_tag, docs, total, freq)

    @classmethod
    def from_sentences(cls, sentences: Iterable[Iterable[str]],
                       language_tag: str = "",
                       stopwords=frozenset()) -> "Corpus":
        """Build a single-document corpus from token sequences."""
        return cls.from_documents([sentences], language_tag, stopwords)


def load_corpus(path, stopwords=frozenset(), language_tag: str = "") -> Corpus:
    """Load a corpus file.

    Format: UTF-8 text, one sentence per line, tokens separated by
    whitespace; a blank line closes the current document. Stop words and
    tokens with no alphabetic character are dropped; a file with nothing
    left after filtering raises DataError.
    """
    documents = []
    doc: Document = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            stripped = line.strip()
            if not stripped:
                if doc:
                    documents.append(doc)
                    doc = []
                continue
            doc.append(stripped.split())
    if doc:
        documents.append(doc)
    try:
        return Corpus.from_documents(documents, language_tag, stopwords)
    except DataError:
        raise DataError(f"empty corpus: {path}") from None


def load_stopwords(path) -> frozenset:
    """Read a stop-word file: UTF-8, one word per line, blanks ignored."""
    words = set()
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            word = line.strip()
            if word:
                words.add(word)
    return frozenset(words)


@dataclass
class Vocabulary:
    """Ordered unique words of a corpus with their frequencies.

    Words are ordered by descending frequency, ties broken
    lexicographically, so row order is reproducible across runs.
    """

    words: list
    frequency: dict
    index: dict

    def __len__(self) -> int:
        return len(self.words)

    def __contains__(self, word: str) -> bool:
        return word in self.index


def build_vocabulary(corpus: Corpus, min_frequency: int = 1) -> Vocabulary:
    """Collect the corpus words occurring at least ``min_frequency`` times."""
    freq = {w: c for w, c in corpus.frequencies.items() if c >= min_frequency}
    if not freq:
        raise DataError(
            f"empty vocabulary: no word reaches frequency {min_frequency}")
    words = sorted(freq, key=lambda w: (-freq[w], w))
    return Vocabulary(words, freq, {w: i for i, w in enumerate(words)})
