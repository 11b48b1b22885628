"""Normalize per-field rankings, fuse them with a weighted sum, filter, sort.

Each field search returns raw scores on its own scale. Text scores get
min-max normalized within the result list; audio similarities are already
absolute values in [0, 1] whose meaning min-max would destroy, so they pass
through. The final score of a song is the weight-sum of its normalized
per-field scores over the union of candidates, with 0 for fields where the
song did not appear, under weights that must sum to 1. Date filtering
happens after the merge, as the last step before sorting.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from datetime import date
from typing import Mapping, Sequence

from .errors import WeightError
from .model import FieldKind, Query, SongRecord

#: Relative importance before renormalization. Exact-ish fields (title,
#: audio) outrank noisy ones (lyrics, genre): a title hit is far less likely
#: to be a false positive than a lyrics hit.
BASE_WEIGHTS: dict[FieldKind, float] = {
    FieldKind.TITLE: 3.0,
    FieldKind.ARTIST: 2.0,
    FieldKind.ALBUM: 2.0,
    FieldKind.GENRE: 1.0,
    FieldKind.LYRICS: 2.0,
    FieldKind.AUDIO: 4.0,
}

WEIGHT_SUM_TOLERANCE = 1e-9


@dataclass(frozen=True)
class FieldResult:
    """One field's scored ranking: song id -> raw (or normalized) score."""

    field: FieldKind
    scores: Mapping[int, float]


@dataclass(frozen=True)
class RankedResult:
    """A merged candidate with its final score and per-field breakdown."""

    song: int
    final_score: float
    breakdown: Mapping[FieldKind, float]


def normalize(result: FieldResult) -> FieldResult:
    """Min-max normalize scores into [0, 1] within this result list.

    A constant (or singleton) list normalizes to all 1.0 so a sole exact
    match is not zeroed out. Audio scores are already absolute similarities
    in [0, 1] and pass through untouched.
    """
    if result.field is FieldKind.AUDIO or not result.scores:
        return result
    values = result.scores.values()
    low, high = min(values), max(values)
    if low == high:
        return FieldResult(result.field, {song: 1.0 for song in result.scores})
    span = high - low
    return FieldResult(
        result.field, {song: (score - low) / span for song, score in result.scores.items()}
    )


def default_weights(present_fields: Sequence[FieldKind]) -> dict[FieldKind, float]:
    """Base weights restricted to the present fields, renormalized to sum 1."""
    return normalize_weights({f: BASE_WEIGHTS[f] for f in present_fields})


def normalize_weights(weights: Mapping[FieldKind, float]) -> dict[FieldKind, float]:
    """Scale non-negative weights to sum exactly 1; rejects empty/zero/negative."""
    if not weights:
        raise WeightError("no fields to weight")
    for field, value in weights.items():
        if value < 0:
            raise WeightError(f"negative weight for {field.value}")
    total = math.fsum(weights.values())
    if total <= 0:
        raise WeightError("weights sum to zero; at least one must be positive")
    return {field: value / total for field, value in weights.items()}


def check_weights(weights: Mapping[FieldKind, float], fields: Sequence[FieldKind]) -> None:
    """Validate that weights cover exactly `fields` and sum to 1."""
    if set(weights) != set(fields):
        raise WeightError(
            f"weights cover {sorted(f.value for f in weights)} "
            f"but results cover {sorted(f.value for f in fields)}"
        )
    total = math.fsum(weights.values())
    if abs(total - 1.0) > WEIGHT_SUM_TOLERANCE:
        raise WeightError(f"weights sum to {total!r}, not 1")


def merge(results: Sequence[FieldResult], weights: Mapping[FieldKind, float]) -> list[RankedResult]:
    """Weighted-sum fusion over the union of candidates.

    Every song gets a breakdown entry for every queried field (0.0 where it
    did not appear), and final_score is the weight-sum of the breakdown,
    accumulated in FieldKind declaration order so recomputing it from the
    breakdown reproduces the stored value bit-exactly.
    """
    check_weights(weights, [r.field for r in results])
    by_field = {result.field: result.scores for result in results}
    candidates = sorted({song for scores in by_field.values() for song in scores})
    field_order = [f for f in FieldKind if f in by_field]
    merged = []
    for song in candidates:
        breakdown = {f: by_field[f].get(song, 0.0) for f in field_order}
        final = 0.0
        for f in field_order:
            final += weights[f] * breakdown[f]
        merged.append(RankedResult(song=song, final_score=final, breakdown=breakdown))
    return merged


def apply_filters(
    results: Sequence[RankedResult], query: Query, records: Sequence[SongRecord]
) -> list[RankedResult]:
    """Drop songs outside the query's (exclusive) release-date bounds."""
    before, after = query.released_before, query.released_after
    if before is None and after is None:
        return list(results)
    kept = []
    for result in results:
        released: date = records[result.song].release_date
        if before is not None and released >= before:
            continue
        if after is not None and released <= after:
            continue
        kept.append(result)
    return kept


def rank(results: Sequence[RankedResult], limit: int) -> list[RankedResult]:
    """Sort by final score descending, ties by song id ascending, truncate."""
    if limit < 1:
        raise ValueError(f"limit must be positive, got {limit}")
    ordered = sorted(results, key=lambda r: (-r.final_score, r.song))
    return ordered[:limit]
