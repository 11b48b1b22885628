"""Domain type validation rules and id-density behavior."""

from __future__ import annotations

from datetime import date

import pytest

from metatune.model import (
    FieldKind,
    PcmAudio,
    Query,
    SongRecord,
    parse_release_date,
    validate_query,
    validate_record,
)


def _record(**overrides) -> SongRecord:
    base = dict(
        id=0,
        title="Harbor Lights",
        artist="Ada Vale",
        release_date=date(1999, 4, 1),
        lyrics="la la la",
    )
    base.update(overrides)
    return SongRecord(**base)


class TestValidateRecord:
    def test_valid_record_passes(self):
        assert validate_record(_record()) == []

    def test_empty_title_is_reported(self):
        violations = validate_record(_record(title="   "))
        assert any("title" in v for v in violations)

    def test_empty_artist_is_reported(self):
        violations = validate_record(_record(artist=""))
        assert any("artist" in v for v in violations)

    def test_non_date_release_is_reported(self):
        violations = validate_record(_record(release_date="2010-02-30"))
        assert any("calendar date" in v for v in violations)

    def test_optional_album_and_genre_allowed(self):
        assert validate_record(_record(album=None, genre=None)) == []


class TestValidateQuery:
    def test_date_bounds_alone_not_searchable(self):
        violations = validate_query(Query(released_before=date(2000, 1, 1)))
        assert any("no searchable field" in v for v in violations)

    def test_lyrics_query_is_valid(self):
        assert validate_query(Query(lyrics="hello")) == []

    def test_inverted_date_bounds_rejected(self):
        q = Query(
            lyrics="x",
            released_after=date(2010, 1, 1),
            released_before=date(2000, 1, 1),
        )
        assert any("date bounds inverted" in v for v in validate_query(q))

    def test_equal_date_bounds_rejected(self):
        q = Query(lyrics="x", released_after=date(2000, 1, 1), released_before=date(2000, 1, 1))
        assert validate_query(q) != []

    def test_whitespace_text_counts_as_absent(self):
        assert Query(lyrics="   ").present_fields() == []
        assert validate_query(Query(lyrics="   ")) != []

    def test_audio_alone_is_searchable(self):
        q = Query(audio=PcmAudio([0.0, 0.1], 8000))
        assert q.present_fields() == [FieldKind.AUDIO]
        assert validate_query(q) == []

    def test_negative_weight_override_rejected(self):
        q = Query(lyrics="x", weight_overrides={FieldKind.LYRICS: -1.0})
        assert any("negative" in v for v in validate_query(q))


class TestParseReleaseDate:
    def test_full_date(self):
        assert parse_release_date("1987-05-09") == date(1987, 5, 9)

    def test_year_normalizes_to_january_first(self):
        assert parse_release_date("1987") == date(1987, 1, 1)

    def test_year_month_normalizes_to_first(self):
        assert parse_release_date("1987-05") == date(1987, 5, 1)

    def test_invalid_date_raises(self):
        with pytest.raises(ValueError):
            parse_release_date("2010-02-30")


class TestPcmAudio:
    def test_rejects_bad_sample_rate(self):
        with pytest.raises(ValueError):
            PcmAudio([0.0], 0)

    def test_rejects_stereo_shape(self):
        with pytest.raises(ValueError):
            PcmAudio([[0.0, 0.1], [0.2, 0.3]], 8000)

    def test_duration(self):
        assert PcmAudio([0.0] * 8000, 8000).duration_seconds == 1.0
