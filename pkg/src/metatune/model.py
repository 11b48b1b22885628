"""Core domain types: songs, queries, fields, and their validation rules.

Everything here is immutable after construction and safe to share across
concurrent searches. Song ids are plain ints assigned densely from 0 in
ingestion order; they are never reused within a corpus.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import date
from enum import Enum
from pathlib import Path
from typing import Mapping

import numpy as np


class FieldKind(str, Enum):
    """One searchable axis of a query; each merge weight refers to exactly one."""

    LYRICS = "lyrics"
    TITLE = "title"
    ARTIST = "artist"
    ALBUM = "album"
    GENRE = "genre"
    AUDIO = "audio"


#: Field kinds backed by the text index (everything except AUDIO).
TEXT_FIELDS: tuple[FieldKind, ...] = (
    FieldKind.LYRICS,
    FieldKind.TITLE,
    FieldKind.ARTIST,
    FieldKind.ALBUM,
    FieldKind.GENRE,
)


@dataclass(frozen=True, eq=False)
class PcmAudio:
    """Mono PCM audio: float64 samples in [-1.0, 1.0] at a fixed sample rate."""

    samples: np.ndarray
    sample_rate: int

    def __post_init__(self):
        if self.sample_rate <= 0:
            raise ValueError(f"sample_rate must be positive, got {self.sample_rate}")
        samples = np.asarray(self.samples, dtype=np.float64)
        if samples.ndim != 1:
            raise ValueError(f"samples must be 1-D mono, got shape {samples.shape}")
        object.__setattr__(self, "samples", samples)

    def __len__(self) -> int:
        return len(self.samples)

    @property
    def duration_seconds(self) -> float:
        return len(self.samples) / self.sample_rate


@dataclass(frozen=True)
class SongRecord:
    """One song's identity, metadata, lyrics, and (optional) audio reference."""

    id: int
    title: str
    artist: str
    release_date: date
    lyrics: str = ""
    album: str | None = None
    genre: str | None = None
    audio: Path | None = None

    def text_for(self, field: FieldKind) -> str | None:
        """Return this record's text for a textual field kind (None if absent)."""
        if field is FieldKind.LYRICS:
            return self.lyrics
        if field is FieldKind.TITLE:
            return self.title
        if field is FieldKind.ARTIST:
            return self.artist
        if field is FieldKind.ALBUM:
            return self.album
        if field is FieldKind.GENRE:
            return self.genre
        raise ValueError(f"{field} is not a textual field")


def validate_record(record: SongRecord) -> list[str]:
    """Check SongRecord invariants; returns the violated ones (empty = valid)."""
    violations = []
    if not record.title or not record.title.strip():
        violations.append("title non-empty after whitespace trimming")
    if not record.artist or not record.artist.strip():
        violations.append("artist non-empty after whitespace trimming")
    if not isinstance(record.release_date, date):
        violations.append("release_date is a valid calendar date")
    if record.id < 0:
        violations.append("song id is non-negative")
    return violations


@dataclass(frozen=True, eq=False)
class Query:
    """A multi-field search request; any combination of fields may be present.

    Date bounds alone are not searchable: at least one of the text fields or
    audio must be present. Both date bounds are exclusive, and when both are
    given they must describe a non-empty open interval.
    """

    lyrics: str | None = None
    title: str | None = None
    artist: str | None = None
    album: str | None = None
    genre: str | None = None
    released_before: date | None = None
    released_after: date | None = None
    audio: PcmAudio | None = None
    weight_overrides: Mapping[FieldKind, float] | None = None

    def text_for(self, field: FieldKind) -> str | None:
        return getattr(self, field.value) if field is not FieldKind.AUDIO else None

    def present_fields(self) -> list[FieldKind]:
        """Searchable fields actually present (blank text counts as absent)."""
        present = []
        for field in TEXT_FIELDS:
            text = self.text_for(field)
            if text is not None and text.strip():
                present.append(field)
        if self.audio is not None:
            present.append(FieldKind.AUDIO)
        return present


def validate_query(query: Query) -> list[str]:
    """Check Query invariants; returns the violated ones (empty = valid)."""
    violations = []
    if not query.present_fields():
        violations.append(
            "no searchable field: at least one of lyrics, title, artist, "
            "album, genre, or audio must be present"
        )
    if query.released_before is not None and query.released_after is not None:
        if not query.released_after < query.released_before:
            violations.append("date bounds inverted: released_after must precede released_before")
    if query.weight_overrides is not None:
        for field, weight in query.weight_overrides.items():
            if not isinstance(field, FieldKind):
                violations.append(f"weight override key {field!r} is not a known field")
            elif weight < 0:
                violations.append(f"weight override for {field.value} is negative")
    return violations


def parse_release_date(value: str) -> date:
    """Parse an ISO-8601 date, allowing year or year-month shorthand.

    Year-only inputs normalize to January 1 of that year, year-month to the
    first of the month. Raises ValueError for anything else.
    """
    text = value.strip()
    parts = text.split("-")
    if len(parts) == 1:
        return date(int(parts[0]), 1, 1)
    if len(parts) == 2:
        return date(int(parts[0]), int(parts[1]), 1)
    return date.fromisoformat(text)
