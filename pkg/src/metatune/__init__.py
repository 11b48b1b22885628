"""metatune: a meta search engine for music.

Search by lyrics, song metadata, an audio excerpt, or any combination: each
present field runs its own independent search (tf-idf over n-gram inverted
indexes for text, Hamming-distance matching over a toggled-bit fingerprint
index for audio), and the per-field rankings fuse into one final ranking
via a weighted sum with date filtering.
"""

from __future__ import annotations

from .engine import EngineConfig, SearchEngine, SearchResponse
from .errors import MetatuneError
from .fingerprint import ExtractorConfig, FingerprintSequence, extract
from .fpindex import FingerprintIndex, FpIndexConfig, expand_keys
from .merge import FieldResult, RankedResult, default_weights, merge, normalize, rank
from .model import FieldKind, PcmAudio, Query, SongRecord, validate_query, validate_record
from .storage import load_corpus, load_indexes, persist_indexes, write_corpus
from .textindex import FieldProfile, TextIndex, ngrams, tokenize
from .wavio import decode_wav, encode_wav

__version__ = "0.1.0"

__all__ = [
    "EngineConfig",
    "ExtractorConfig",
    "FieldKind",
    "FieldProfile",
    "FieldResult",
    "FingerprintIndex",
    "FingerprintSequence",
    "FpIndexConfig",
    "MetatuneError",
    "PcmAudio",
    "Query",
    "RankedResult",
    "SearchEngine",
    "SearchResponse",
    "SongRecord",
    "TextIndex",
    "decode_wav",
    "default_weights",
    "encode_wav",
    "expand_keys",
    "extract",
    "load_corpus",
    "load_indexes",
    "merge",
    "ngrams",
    "normalize",
    "persist_indexes",
    "rank",
    "tokenize",
    "validate_query",
    "validate_record",
    "write_corpus",
]
