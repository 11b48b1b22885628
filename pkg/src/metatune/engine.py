"""The search pipeline: validate, fan out per-field searches, merge, rank.

A SearchEngine owns one corpus's frozen indexes. execute() runs every
present field's search as an independent task (concurrently by default,
sequentially when configured — the response is identical either way),
normalizes the per-field scores, fuses them under the applied weights,
drops songs outside the date bounds, and sorts. Per-field and total wall
times are reported so the parallel speedup is observable, but timing never
affects results.
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dc_field
from datetime import date
from typing import Callable, Mapping

from .errors import (
    AudioTooShortError,
    EmptyTextQueryError,
    QueryFieldError,
    QueryValidationError,
)
from .fingerprint import ExtractorConfig, extract
from .fpindex import FingerprintIndex, FpIndexConfig
from .merge import (
    BASE_WEIGHTS,
    FieldResult,
    apply_filters,
    default_weights,
    merge,
    normalize,
    normalize_weights,
    rank,
)
from .model import TEXT_FIELDS, FieldKind, Query, SongRecord, validate_query, validate_record
from .textindex import FieldProfile, TextIndex, default_profiles


@dataclass(frozen=True)
class EngineConfig:
    """Everything that shapes index content and query behavior."""

    profiles: Mapping[FieldKind, FieldProfile] = dc_field(default_factory=default_profiles)
    extractor: ExtractorConfig = ExtractorConfig()
    fp: FpIndexConfig = FpIndexConfig()
    default_limit: int = 20
    # Per-field searches rank this many candidates (at least the requested
    # limit) so post-merge filtering does not starve the final list.
    field_pool: int = 100
    parallel: bool = True


@dataclass(frozen=True)
class SongSummary:
    """Metadata subset returned with each result (no lyrics, no audio)."""

    id: int
    title: str
    artist: str
    release_date: date
    album: str | None = None
    genre: str | None = None

    @classmethod
    def of(cls, record: SongRecord) -> SongSummary:
        return cls(
            id=record.id,
            title=record.title,
            artist=record.artist,
            release_date=record.release_date,
            album=record.album,
            genre=record.genre,
        )

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "title": self.title,
            "artist": self.artist,
            "album": self.album,
            "genre": self.genre,
            "release_date": self.release_date.isoformat(),
        }


@dataclass(frozen=True)
class SearchHit:
    song: SongSummary
    final_score: float
    breakdown: Mapping[FieldKind, float]

    def to_dict(self) -> dict:
        return {
            "song": self.song.to_dict(),
            "final_score": self.final_score,
            "breakdown": {f.value: s for f, s in self.breakdown.items()},
        }


@dataclass(frozen=True)
class SearchResponse:
    results: list[SearchHit]
    applied_weights: Mapping[FieldKind, float]
    field_times_ms: Mapping[FieldKind, float]
    total_ms: float

    def to_dict(self, include_timing: bool = True) -> dict:
        payload = {
            "results": [hit.to_dict() for hit in self.results],
            "applied_weights": {f.value: w for f, w in self.applied_weights.items()},
        }
        if include_timing:
            payload["timing"] = {
                "per_field_ms": {f.value: t for f, t in self.field_times_ms.items()},
                "total_ms": self.total_ms,
            }
        return payload


class SearchEngine:
    """Frozen indexes for one corpus plus the query pipeline over them."""

    def __init__(
        self,
        records: list[SongRecord],
        text_indexes: Mapping[FieldKind, TextIndex],
        fp_index: FingerprintIndex,
        config: EngineConfig,
    ):
        self.records = records
        self.text_indexes = dict(text_indexes)
        self.fp_index = fp_index
        self.config = config

    @classmethod
    def build(
        cls,
        records: list[SongRecord],
        audio_for: Callable[[SongRecord], "object | None"] | None = None,
        config: EngineConfig | None = None,
    ) -> SearchEngine:
        """Index a corpus. audio_for maps a record to PcmAudio (or None).

        Records must already be valid with dense ids 0..K-1 in list order.
        Songs whose audio_for returns None simply stay out of the audio
        index; absent album/genre stay out of those fields' indexes.
        """
        config = config or EngineConfig()
        for position, record in enumerate(records):
            violations = validate_record(record)
            if violations:
                raise ValueError(f"record {position} invalid: " + "; ".join(violations))
            if record.id != position:
                raise ValueError(
                    f"song ids must be dense in list order; saw id {record.id} at {position}"
                )
        text_indexes = {f: TextIndex(config.profiles[f]) for f in TEXT_FIELDS}
        fp_index = FingerprintIndex(config.fp)
        for record in records:
            for f in TEXT_FIELDS:
                text = record.text_for(f)
                if text is not None:
                    text_indexes[f].index_document(record.id, text)
            if audio_for is not None:
                audio = audio_for(record)
                if audio is not None:
                    fp_index.insert_song(record.id, extract(audio, config.extractor))
        for index in text_indexes.values():
            index.freeze()
        fp_index.freeze()
        return cls(records, text_indexes, fp_index, config)

    def song(self, song_id: int) -> SongRecord:
        if not 0 <= song_id < len(self.records):
            raise KeyError(f"no song with id {song_id}")
        return self.records[song_id]

    def _search_field(self, field: FieldKind, query: Query, pool: int) -> dict[int, float]:
        """Run one field's search, wrapping field-specific failures."""
        if field is FieldKind.AUDIO:
            try:
                words = extract(query.audio, self.config.extractor)
                return dict(self.fp_index.search(words, pool))
            except AudioTooShortError as exc:
                raise QueryFieldError(field, str(exc)) from exc
        try:
            return dict(self.text_indexes[field].search(query.text_for(field), pool))
        except EmptyTextQueryError as exc:
            raise QueryFieldError(field, str(exc)) from exc

    def execute(self, query: Query, limit: int | None = None) -> SearchResponse:
        """Full pipeline; deterministic for a given corpus, config, and query."""
        violations = validate_query(query)
        if violations:
            raise QueryValidationError(violations)
        limit = self.config.default_limit if limit is None else limit
        if limit < 1:
            raise QueryValidationError([f"limit must be positive, got {limit}"])
        fields = query.present_fields()
        pool = max(limit, self.config.field_pool)

        start_total = time.perf_counter()
        raw: dict[FieldKind, dict[int, float]] = {}
        times: dict[FieldKind, float] = {}
        if self.config.parallel and len(fields) > 1:
            with ThreadPoolExecutor(max_workers=len(fields)) as pool_exec:
                futures = {
                    f: pool_exec.submit(self._timed_search, f, query, pool) for f in fields
                }
                for f in fields:
                    raw[f], times[f] = futures[f].result()
        else:
            for f in fields:
                raw[f], times[f] = self._timed_search(f, query, pool)

        normalized = [normalize(FieldResult(f, raw[f])) for f in fields]
        weights = self._applied_weights(query, fields)
        merged = merge(normalized, weights)
        filtered = apply_filters(merged, query, self.records)
        final = rank(filtered, limit)
        total_ms = (time.perf_counter() - start_total) * 1000.0

        hits = [
            SearchHit(SongSummary.of(self.records[r.song]), r.final_score, r.breakdown)
            for r in final
        ]
        return SearchResponse(
            results=hits, applied_weights=weights, field_times_ms=times, total_ms=total_ms
        )

    def _timed_search(self, field, query, pool):
        start = time.perf_counter()
        scores = self._search_field(field, query, pool)
        return scores, (time.perf_counter() - start) * 1000.0

    def _applied_weights(self, query: Query, fields: list[FieldKind]) -> dict[FieldKind, float]:
        """Defaults, or query overrides (missing fields keep their base weight)."""
        if query.weight_overrides is None:
            return default_weights(fields)
        base = {f: float(query.weight_overrides.get(f, BASE_WEIGHTS[f])) for f in fields}
        return normalize_weights(base)

    def ranked_for_field(self, field: FieldKind, query: Query, limit: int) -> list[int]:
        """The single-field ranking (ids only); used by parity checks and demos."""
        scores = self._search_field(field, query, max(limit, self.config.field_pool))
        ordered = sorted(scores.items(), key=lambda item: (-item[1], item[0]))
        return [song for song, _ in ordered[:limit]]
