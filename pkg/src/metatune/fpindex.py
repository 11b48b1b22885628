"""Inverted index over sub-fingerprints with Hamming-tolerant lookup.

Every stored 32-bit word is expanded at index time into all variants with
up to `toggle_bits` bits flipped; each variant key resolves to the same
shared posting list as the original word, so a query word corrupted by that
many bit errors still lands on the right list with a single exact lookup.
When two stored words are close enough that their variant balls overlap, a
key resolves to every covering list (the key map holds canonical words, not
copies of postings).

Search runs in two phases. The coarse phase looks each query word up and
tallies, per candidate song, how many postings matched and at which
alignment shifts. The fine phase takes the most frequent shift, lays the
query against the stored sequence there, and scores the overlap by bit
error rate; candidates pass only with enough overlap and a BER under the
threshold. Similarity is 1 - BER.
"""

from __future__ import annotations

import math
from bisect import insort
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from itertools import combinations

import numpy as np

from .errors import AudioTooShortError, DuplicateSongError
from .fingerprint import SUBFP_BITS, FingerprintSequence

_POPCOUNT16 = np.array([bin(i).count("1") for i in range(1 << 16)], dtype=np.uint32)


def popcount32(words: np.ndarray) -> np.ndarray:
    """Per-element population count of a uint32 array."""
    words = np.asarray(words, dtype=np.uint32)
    return _POPCOUNT16[words & 0xFFFF] + _POPCOUNT16[words >> 16]


@dataclass(frozen=True)
class FpIndexConfig:
    """Tuning knobs for indexing and the coarse/fine search phases.

    coarse_min_matches None means "derive from query length": a candidate
    must collect at least max(3, ceil(2% of the query words)) posting hits.
    expand_at_query trades the 33x (or 529x, ...) key-map blowup for doing
    the neighborhood expansion per query word instead; results are identical.
    """

    toggle_bits: int = 1
    coarse_min_matches: int | None = None
    ber_threshold: float = 0.35
    min_overlap_fraction: float = 0.8
    expand_at_query: bool = False

    def __post_init__(self):
        if not 0 <= self.toggle_bits <= SUBFP_BITS:
            raise ValueError(f"toggle_bits must be in [0, {SUBFP_BITS}]")
        if self.coarse_min_matches is not None and self.coarse_min_matches < 1:
            raise ValueError("coarse_min_matches must be positive")
        if not 0.0 < self.ber_threshold < 1.0:
            raise ValueError("ber_threshold must be in (0, 1)")
        if not 0.0 < self.min_overlap_fraction <= 1.0:
            raise ValueError("min_overlap_fraction must be in (0, 1]")

    def min_matches_for(self, query_len: int) -> int:
        if self.coarse_min_matches is not None:
            return self.coarse_min_matches
        return max(3, math.ceil(0.02 * query_len))

    def keys_per_word(self) -> int:
        """1 + sum of C(32, i) for i = 1..toggle_bits."""
        return 1 + sum(math.comb(SUBFP_BITS, i) for i in range(1, self.toggle_bits + 1))


def expand_keys(word: int, n: int) -> set[int]:
    """The word plus every variant with at most n bit positions flipped."""
    if not 0 <= n <= SUBFP_BITS:
        raise ValueError(f"n must be in [0, {SUBFP_BITS}]")
    word = int(word)
    keys = {word}
    for flips in range(1, n + 1):
        for positions in combinations(range(SUBFP_BITS), flips):
            mask = 0
            for p in positions:
                mask |= 1 << p
            keys.add(word ^ mask)
    return keys


@dataclass
class CoarseCandidate:
    """Match evidence gathered for one song during the coarse phase."""

    song: int
    shifts: Counter  # alignment shift (stored offset - query position) -> votes

    @property
    def match_count(self) -> int:
        return sum(self.shifts.values())

    def best_shift(self) -> int:
        """Most frequent shift; ties break toward the smallest shift."""
        best = max(self.shifts.values())
        return min(s for s, c in self.shifts.items() if c == best)


class FineOutcome(Enum):
    ACCEPTED = "accepted"
    REJECTED_BER = "rejected_ber"
    INSUFFICIENT_OVERLAP = "insufficient_overlap"


@dataclass(frozen=True)
class FineResult:
    """Outcome of aligning one candidate: similarity only when accepted."""

    song: int
    outcome: FineOutcome
    shift: int
    overlap: int
    similarity: float | None = None


class FingerprintIndex:
    """Mutable while songs are inserted; freeze() before concurrent searches.

    Attributes:
        key_map: 32-bit key -> canonical stored words whose variant ball
            covers the key (only populated when expanding at index time).
        posting_lists: canonical word -> [(song, offset)] sorted ascending.
        store: song id -> full fingerprint word array.
    """

    def __init__(self, config: FpIndexConfig | None = None):
        self.config = config or FpIndexConfig()
        self.key_map: dict[int, list[int]] = {}
        self.posting_lists: dict[int, list[tuple[int, int]]] = {}
        self.store: dict[int, np.ndarray] = {}
        self._frozen = False

    def __eq__(self, other) -> bool:
        if not isinstance(other, FingerprintIndex):
            return NotImplemented
        return (
            self.config == other.config
            and self.key_map == other.key_map
            and self.posting_lists == other.posting_lists
            and self.store.keys() == other.store.keys()
            and all(np.array_equal(self.store[s], other.store[s]) for s in self.store)
        )

    def insert_song(self, song: int, seq: FingerprintSequence) -> None:
        """Add one song's fingerprint sequence and register all its keys."""
        if self._frozen:
            raise RuntimeError("index is frozen")
        if song in self.store:
            raise DuplicateSongError(f"song {song} already in fingerprint index")
        self.store[song] = np.array(seq.words, dtype=np.uint32)
        for offset, word in enumerate(seq.words):
            word = int(word)
            entries = self.posting_lists.get(word)
            if entries is None:
                self.posting_lists[word] = [(song, offset)]
                if not self.config.expand_at_query:
                    for key in sorted(expand_keys(word, self.config.toggle_bits)):
                        self.key_map.setdefault(key, []).append(word)
            else:
                insort(entries, (song, offset))

    def freeze(self) -> None:
        """Canonicalize ordering and forbid writes.

        Posting lists sort by word and each key's canonical-word list sorts
        ascending, matching what a snapshot load reconstructs.
        """
        self.posting_lists = dict(sorted(self.posting_lists.items()))
        for canonicals in self.key_map.values():
            canonicals.sort()
        self._frozen = True

    def _covering_words(self, query_word: int) -> list[int]:
        """Canonical stored words within toggle_bits of the query word."""
        if self.config.expand_at_query:
            return [
                key
                for key in sorted(expand_keys(query_word, self.config.toggle_bits))
                if key in self.posting_lists
            ]
        return self.key_map.get(query_word, [])

    def coarse_search(self, query: FingerprintSequence) -> dict[int, CoarseCandidate]:
        """Collect per-song posting hits and alignment shifts for the query.

        Query words are looked up as-is: index-time expansion already covers
        up to toggle_bits errors per word. Only songs reaching the configured
        minimum match count survive.
        """
        if len(query) == 0:
            raise AudioTooShortError("query fingerprint sequence is empty")
        evidence: dict[int, CoarseCandidate] = {}
        for position, word in enumerate(query.words):
            for canonical in self._covering_words(int(word)):
                for song, offset in self.posting_lists[canonical]:
                    candidate = evidence.get(song)
                    if candidate is None:
                        candidate = evidence[song] = CoarseCandidate(song, Counter())
                    candidate.shifts[offset - position] += 1
        threshold = self.config.min_matches_for(len(query))
        return {
            song: cand for song, cand in evidence.items() if cand.match_count >= threshold
        }

    def fine_search(self, candidate: CoarseCandidate, query: FingerprintSequence) -> FineResult:
        """Score one coarse candidate by bit error rate at its best shift.

        The overlap must cover at least min_overlap_fraction of the query,
        and the BER must not exceed ber_threshold; the two failure modes are
        reported distinctly.
        """
        shift = candidate.best_shift()
        stored = self.store[candidate.song]
        lo = max(0, -shift)
        hi = min(len(query), len(stored) - shift)
        overlap = hi - lo
        if overlap < self.config.min_overlap_fraction * len(query):
            return FineResult(candidate.song, FineOutcome.INSUFFICIENT_OVERLAP, shift, max(overlap, 0))
        errors = int(popcount32(query.words[lo:hi] ^ stored[lo + shift : hi + shift]).sum())
        ber = errors / (SUBFP_BITS * overlap)
        if ber > self.config.ber_threshold:
            return FineResult(candidate.song, FineOutcome.REJECTED_BER, shift, overlap)
        return FineResult(candidate.song, FineOutcome.ACCEPTED, shift, overlap, similarity=1.0 - ber)

    def search(self, query: FingerprintSequence, limit: int) -> list[tuple[int, float]]:
        """Coarse then fine search; (song, similarity) best-first, at most limit."""
        if limit < 1:
            raise ValueError(f"limit must be positive, got {limit}")
        accepted = []
        candidates = self.coarse_search(query)
        for song in sorted(candidates):
            result = self.fine_search(candidates[song], query)
            if result.outcome is FineOutcome.ACCEPTED:
                accepted.append((song, result.similarity))
        accepted.sort(key=lambda item: (-item[1], item[0]))
        return accepted[:limit]

    def check_key_coverage(self) -> None:
        """Exhaustive toggle-completeness check (desk scale only).

        For every stored word f and every variant g with Hamming(f, g) <=
        toggle_bits, resolving g must reach f's posting list.
        """
        for word in self.posting_lists:
            for key in expand_keys(word, self.config.toggle_bits):
                assert word in self._covering_words(key), (word, key)
