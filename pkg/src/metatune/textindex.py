"""Tokenization, N-gram inverted indexing, and tf-idf ranking for text fields.

Each textual field (lyrics, title, artist, album, genre) gets its own index
with its own profile. Lyrics drop stop words; the short metadata fields keep
them because a stop word in a title can be the whole point. Terms are the
tokens plus every contiguous k-gram up to the profile's ngram_max, so short
phrases match as units and outrank scattered co-occurrence.

Scoring is a standard log-tf / smoothed-idf sum with no document length
normalization: a chorus repeating the queried line is supposed to rank
higher, not be normalized away.
"""

from __future__ import annotations

import math
import re
from bisect import insort
from collections import Counter
from dataclasses import dataclass

from .errors import DuplicateSongError, EmptyTextQueryError
from .model import FieldKind
from .stopwords import STOPWORDS

# Tokens are maximal runs of ASCII alphanumerics in the lowercased text;
# everything else (punctuation, apostrophes, accented letters) separates.
_TOKEN_RE = re.compile(r"[a-z0-9]+")


@dataclass(frozen=True)
class FieldProfile:
    """How one textual field is tokenized and indexed."""

    field: FieldKind
    remove_stopwords: bool
    ngram_max: int

    def __post_init__(self):
        if self.field is FieldKind.AUDIO:
            raise ValueError("audio is not a textual field")
        if self.ngram_max < 1:
            raise ValueError(f"ngram_max must be >= 1, got {self.ngram_max}")
        # Stop-word policy is fixed per field kind: lyrics drop them, the
        # short metadata fields keep them (a stop word can be the title).
        if self.remove_stopwords != (self.field is FieldKind.LYRICS):
            raise ValueError(
                f"remove_stopwords must be {self.field is FieldKind.LYRICS} "
                f"for {self.field.value}"
            )


def default_profiles() -> dict[FieldKind, FieldProfile]:
    """Default per-field profiles: bigrams for lyrics/title, unigrams for names."""
    return {
        FieldKind.LYRICS: FieldProfile(FieldKind.LYRICS, remove_stopwords=True, ngram_max=2),
        FieldKind.TITLE: FieldProfile(FieldKind.TITLE, remove_stopwords=False, ngram_max=2),
        FieldKind.ARTIST: FieldProfile(FieldKind.ARTIST, remove_stopwords=False, ngram_max=1),
        FieldKind.ALBUM: FieldProfile(FieldKind.ALBUM, remove_stopwords=False, ngram_max=1),
        FieldKind.GENRE: FieldProfile(FieldKind.GENRE, remove_stopwords=False, ngram_max=1),
    }


def tokenize(text: str, profile: FieldProfile) -> list[str]:
    """Lowercase, split on non-alphanumeric runs, optionally drop stop words."""
    tokens = _TOKEN_RE.findall(text.lower())
    if profile.remove_stopwords:
        tokens = [t for t in tokens if t not in STOPWORDS]
    return tokens


def ngrams(tokens: list[str], n: int) -> list[str]:
    """All contiguous k-grams for k = 1..min(n, len(tokens)), space-joined.

    Ordered by k ascending, then by start position, so unigrams come first.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    out = []
    for k in range(1, min(n, len(tokens)) + 1):
        for start in range(len(tokens) - k + 1):
            out.append(" ".join(tokens[start : start + k]))
    return out


class TextIndex:
    """Inverted index over one field's terms with tf-idf search.

    Built by a single writer via index_document(), then frozen; a frozen
    index is immutable and safe for unlimited concurrent readers.

    Attributes:
        profile: the field profile the index was built with.
        doc_count: documents whose text produced at least one token.
        doc_lengths: song id -> token count (token count 0 is recorded too).
        postings: term -> list of (song_id, term_frequency), sorted by song id.
        document_frequency: term -> number of songs containing the term.
    """

    def __init__(self, profile: FieldProfile):
        self.profile = profile
        self.doc_count = 0
        self.doc_lengths: dict[int, int] = {}
        self.postings: dict[str, list[tuple[int, int]]] = {}
        self.document_frequency: dict[str, int] = {}
        self._frozen = False

    def index_document(self, song_id: int, text: str) -> None:
        """Add one song's field text. Each song may be indexed at most once."""
        if self._frozen:
            raise RuntimeError("index is frozen")
        if song_id in self.doc_lengths:
            raise DuplicateSongError(f"song {song_id} already indexed")
        tokens = tokenize(text, self.profile)
        self.doc_lengths[song_id] = len(tokens)
        if not tokens:
            # Empty-after-tokenization documents stay out of doc_count so the
            # idf denominator reflects only documents that can actually match.
            return
        self.doc_count += 1
        for term, tf in Counter(ngrams(tokens, self.profile.ngram_max)).items():
            entries = self.postings.get(term)
            if entries is None:
                self.postings[term] = [(song_id, tf)]
            else:
                insort(entries, (song_id, tf))
            self.document_frequency[term] = self.document_frequency.get(term, 0) + 1

    def freeze(self) -> None:
        """Canonicalize ordering (terms sorted, ids sorted) and forbid writes.

        Term-sorted postings are the persisted layout; freezing makes the
        in-memory and on-disk representations coincide.
        """
        self.postings = dict(sorted(self.postings.items()))
        self.document_frequency = {t: self.document_frequency[t] for t in self.postings}
        self.doc_lengths = dict(sorted(self.doc_lengths.items()))
        self._frozen = True

    def idf(self, term: str) -> float:
        """Smoothed inverse document frequency; always >= 1."""
        df = self.document_frequency.get(term, 0)
        return math.log((self.doc_count + 1) / (df + 1)) + 1.0

    def search(self, query_text: str, limit: int) -> list[tuple[int, float]]:
        """Rank songs for a query by summed tf-idf over its terms.

        The query goes through the same tokenize + ngram path as documents.
        A term occurring q times in the query contributes q * tf * idf, with
        tf = 1 + ln(term frequency in the document). Songs with score 0 are
        excluded; ties break by ascending song id; at most `limit` results.

        Raises EmptyTextQueryError when the query has no terms at all, which
        is a different situation than "no document matched".
        """
        if limit < 1:
            raise ValueError(f"limit must be positive, got {limit}")
        tokens = tokenize(query_text, self.profile)
        terms = ngrams(tokens, self.profile.ngram_max)
        if not terms:
            raise EmptyTextQueryError(
                f"{self.profile.field.value} query tokenized to no terms: {query_text!r}"
            )
        scores: dict[int, float] = {}
        for term, query_count in Counter(terms).items():
            entries = self.postings.get(term)
            if not entries:
                continue
            weight = query_count * self.idf(term)
            for song_id, tf in entries:
                contribution = weight * (1.0 + math.log(tf))
                scores[song_id] = scores.get(song_id, 0.0) + contribution
        ranked = sorted(scores.items(), key=lambda item: (-item[1], item[0]))
        return ranked[:limit]

    def check_consistency(self) -> None:
        """Full-scan invariant check: df matches postings, entries sorted."""
        assert set(self.document_frequency) == set(self.postings)
        for term, entries in self.postings.items():
            assert self.document_frequency[term] == len(entries), term
            ids = [song_id for song_id, _ in entries]
            assert ids == sorted(ids) and len(ids) == len(set(ids)), term
            assert all(tf > 0 for _, tf in entries), term
        indexed_nonempty = {s for s, n in self.doc_lengths.items() if n > 0}
        assert self.doc_count == len(indexed_nonempty)
