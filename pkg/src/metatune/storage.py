"""Corpus files and index snapshots on disk.

A corpus is UTF-8 JSON-lines: one record per line with keys title, artist,
release_date (ISO-8601; bare years normalize to Jan 1), lyrics, and
optional album, genre, audio_path (a WAV relative to the corpus file).
Song ids are assigned densely from 0 in file order.

A snapshot directory holds one file per index plus a manifest that is
written last, so a crash mid-persist leaves no manifest and the load fails
loudly instead of reading a torn state. Every file carries the format
version and a digest over all index configurations (profiles, stop-word
list, extractor and fingerprint-index parameters); loading refuses version
or digest mismatches. The expanded fingerprint key map is not persisted —
it is rebuilt from the canonical words on load, which keeps snapshots small
and digest-stable.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import asdict
from pathlib import Path
from typing import Mapping

import numpy as np

from .engine import EngineConfig, SearchEngine
from .errors import (
    CorpusError,
    DigestMismatchError,
    MissingManifestError,
    RecordValidationError,
    SnapshotCorruptError,
    VersionMismatchError,
)
from .fingerprint import ExtractorConfig
from .fpindex import FingerprintIndex, FpIndexConfig, expand_keys
from .model import TEXT_FIELDS, FieldKind, PcmAudio, SongRecord, parse_release_date, validate_record
from .stopwords import stopwords_digest
from .textindex import FieldProfile, TextIndex
from .wavio import decode_wav, encode_wav

FORMAT_VERSION = 1

_MANIFEST = "manifest.json"
_SONGS = "songs.jsonl"
_FINGERPRINTS = "fingerprints.json"


def _text_index_file(field: FieldKind) -> str:
    return f"text_{field.value}.json"


def config_digest(config: EngineConfig) -> str:
    """Hash of everything that shapes index content, incl. the stop-word list."""
    payload = {
        "stopwords": stopwords_digest(),
        "profiles": {
            f.value: {
                "remove_stopwords": p.remove_stopwords,
                "ngram_max": p.ngram_max,
            }
            for f, p in sorted(config.profiles.items(), key=lambda item: item[0].value)
        },
        "extractor": asdict(config.extractor),
        "fp": asdict(config.fp),
    }
    canonical = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


# ----------------------------------------------------------------------
# Corpus files
# ----------------------------------------------------------------------

def load_corpus(path: str | Path) -> list[SongRecord]:
    """Read a JSONL corpus; ids are assigned 0..K-1 in file order.

    Raises CorpusError with the offending line number on malformed JSON and
    RecordValidationError with the record index on invariant violations.
    Audio paths resolve relative to the corpus file's directory.
    """
    path = Path(path)
    if not path.exists():
        raise CorpusError(f"corpus file not found: {path}")
    records: list[SongRecord] = []
    base = path.parent
    with path.open("r", encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            try:
                data = json.loads(line)
            except json.JSONDecodeError as exc:
                raise CorpusError(f"{path.name} line {line_no}: malformed record ({exc.msg})")
            record, violations = _record_from_dict(data, song_id=len(records), base=base)
            if violations:
                raise RecordValidationError(len(records), violations)
            records.append(record)
    return records


def _record_from_dict(
    data: dict, song_id: int, base: Path
) -> tuple[SongRecord | None, list[str]]:
    violations = []
    if not isinstance(data, dict):
        return None, ["record is not an object"]
    release_date = None
    raw_date = data.get("release_date")
    if raw_date is None:
        violations.append("release_date is required")
    else:
        try:
            release_date = parse_release_date(str(raw_date))
        except ValueError:
            violations.append(f"release_date {raw_date!r} is not a valid calendar date")
    audio_path = data.get("audio_path")
    record = SongRecord(
        id=song_id,
        title=str(data.get("title", "")),
        artist=str(data.get("artist", "")),
        release_date=release_date,
        lyrics=str(data.get("lyrics", "")),
        album=data.get("album"),
        genre=data.get("genre"),
        audio=(base / audio_path) if audio_path else None,
    )
    violations.extend(v for v in validate_record(record) if "calendar date" not in v)
    if violations:
        return None, violations
    return record, []


def record_to_dict(record: SongRecord, audio_path: str | None = None) -> dict:
    data = {
        "title": record.title,
        "artist": record.artist,
        "release_date": record.release_date.isoformat(),
        "lyrics": record.lyrics,
    }
    if record.album is not None:
        data["album"] = record.album
    if record.genre is not None:
        data["genre"] = record.genre
    if audio_path is not None:
        data["audio_path"] = audio_path
    return data


def write_corpus(
    records: list[SongRecord],
    directory: str | Path,
    audio: Mapping[int, PcmAudio] | None = None,
) -> Path:
    """Write records (and 16-bit WAVs for any provided audio) under directory.

    Returns the path of the songs.jsonl file. Useful for the synthetic
    corpora the evaluation harness generates.
    """
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    audio = audio or {}
    wav_dir = directory / "wav"
    if audio:
        wav_dir.mkdir(exist_ok=True)
    corpus_path = directory / _SONGS
    with corpus_path.open("w", encoding="utf-8") as handle:
        for record in records:
            audio_path = None
            if record.id in audio:
                audio_path = f"wav/{record.id:05d}.wav"
                pcm = audio[record.id]
                (directory / audio_path).write_bytes(
                    encode_wav(pcm.samples, pcm.sample_rate, bit_depth=16)
                )
            handle.write(json.dumps(record_to_dict(record, audio_path)) + "\n")
    return corpus_path


def corpus_audio_loader(records: list[SongRecord]):
    """Returns an audio_for callable that decodes each record's WAV file."""

    def audio_for(record: SongRecord) -> PcmAudio | None:
        if record.audio is None:
            return None
        return decode_wav(Path(record.audio).read_bytes())

    return audio_for


# ----------------------------------------------------------------------
# Index snapshots
# ----------------------------------------------------------------------

def persist_indexes(engine: SearchEngine, directory: str | Path) -> None:
    """Write all indexes plus the manifest (manifest last)."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    digest = config_digest(engine.config)
    header = {"format_version": FORMAT_VERSION, "config_digest": digest}

    with (directory / _SONGS).open("w", encoding="utf-8") as handle:
        handle.write(json.dumps({**header, "song_count": len(engine.records)}) + "\n")
        for record in engine.records:
            data = record_to_dict(record, str(record.audio) if record.audio else None)
            handle.write(json.dumps(data) + "\n")

    for field in TEXT_FIELDS:
        index = engine.text_indexes[field]
        payload = {
            **header,
            "profile": {
                "field": field.value,
                "remove_stopwords": index.profile.remove_stopwords,
                "ngram_max": index.profile.ngram_max,
            },
            "doc_count": index.doc_count,
            "doc_lengths": {str(s): n for s, n in sorted(index.doc_lengths.items())},
            "postings": {term: entries for term, entries in sorted(index.postings.items())},
        }
        _dump_json(directory / _text_index_file(field), payload)

    fp = engine.fp_index
    payload = {
        **header,
        "config": asdict(fp.config),
        "extractor": asdict(engine.config.extractor),
        "store": {str(s): [int(w) for w in words] for s, words in sorted(fp.store.items())},
        "postings": {str(w): entries for w, entries in sorted(fp.posting_lists.items())},
    }
    _dump_json(directory / _FINGERPRINTS, payload)

    manifest = {
        "format_version": FORMAT_VERSION,
        "song_count": len(engine.records),
        "config_digest": digest,
    }
    _dump_json(directory / _MANIFEST, manifest)


def _dump_json(path: Path, payload: dict) -> None:
    with path.open("w", encoding="utf-8") as handle:
        json.dump(payload, handle)


def _load_json(path: Path) -> dict:
    if not path.exists():
        raise SnapshotCorruptError(f"snapshot file missing: {path.name}")
    try:
        with path.open("r", encoding="utf-8") as handle:
            return json.load(handle)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise SnapshotCorruptError(f"{path.name}: {exc}")


def _check_header(payload: dict, expected_digest: str, name: str) -> None:
    if payload.get("format_version") != FORMAT_VERSION:
        raise VersionMismatchError(
            f"{name}: format version {payload.get('format_version')} != {FORMAT_VERSION}"
        )
    if payload.get("config_digest") != expected_digest:
        raise DigestMismatchError(f"{name}: config digest does not match manifest")


def load_indexes(directory: str | Path, parallel: bool = True) -> SearchEngine:
    """Rebuild a SearchEngine from a snapshot; refuses mismatched snapshots.

    The loaded engine is bit-identical to the persisted one: same records,
    same postings, same fingerprint store, with the expanded key map rebuilt
    from the canonical words and the persisted toggle_bits.
    """
    directory = Path(directory)
    manifest_path = directory / _MANIFEST
    if not manifest_path.exists():
        raise MissingManifestError(
            f"no manifest in {directory} (snapshot absent or persist interrupted)"
        )
    manifest = _load_json(manifest_path)
    if manifest.get("format_version") != FORMAT_VERSION:
        raise VersionMismatchError(
            f"manifest format version {manifest.get('format_version')} != {FORMAT_VERSION}"
        )
    digest = manifest.get("config_digest", "")

    records, _ = _load_songs(directory / _SONGS, digest)
    if manifest.get("song_count") != len(records):
        raise SnapshotCorruptError(
            f"manifest says {manifest.get('song_count')} songs, file has {len(records)}"
        )

    profiles: dict[FieldKind, FieldProfile] = {}
    text_indexes: dict[FieldKind, TextIndex] = {}
    for field in TEXT_FIELDS:
        payload = _load_json(directory / _text_index_file(field))
        _check_header(payload, digest, _text_index_file(field))
        profile = FieldProfile(
            field=field,
            remove_stopwords=payload["profile"]["remove_stopwords"],
            ngram_max=payload["profile"]["ngram_max"],
        )
        profiles[field] = profile
        index = TextIndex(profile)
        index.doc_count = payload["doc_count"]
        index.doc_lengths = {int(s): n for s, n in payload["doc_lengths"].items()}
        index.postings = {
            term: [(song, tf) for song, tf in entries]
            for term, entries in payload["postings"].items()
        }
        index.document_frequency = {t: len(e) for t, e in index.postings.items()}
        index.freeze()
        text_indexes[field] = index

    payload = _load_json(directory / _FINGERPRINTS)
    _check_header(payload, digest, _FINGERPRINTS)
    fp_config = FpIndexConfig(**payload["config"])
    fp_index = FingerprintIndex(fp_config)
    fp_index.store = {
        int(s): np.array(words, dtype=np.uint32) for s, words in payload["store"].items()
    }
    fp_index.posting_lists = {
        int(w): [(song, offset) for song, offset in entries]
        for w, entries in payload["postings"].items()
    }
    if not fp_config.expand_at_query:
        for word in fp_index.posting_lists:
            for key in sorted(expand_keys(word, fp_config.toggle_bits)):
                fp_index.key_map.setdefault(key, []).append(word)
    fp_index.freeze()

    config = EngineConfig(
        profiles=profiles,
        extractor=ExtractorConfig(**_coerce_extractor(payload.get("extractor"))),
        fp=fp_config,
        parallel=parallel,
    )
    engine = SearchEngine(records, text_indexes, fp_index, config)
    if config_digest(engine.config) != digest:
        raise DigestMismatchError(
            "digest recomputed from loaded configs does not match the manifest"
        )
    return engine


def _coerce_extractor(payload) -> dict:
    return payload if isinstance(payload, dict) else {}


def _load_songs(path: Path, digest: str) -> tuple[list[SongRecord], dict]:
    if not path.exists():
        raise SnapshotCorruptError(f"snapshot file missing: {path.name}")
    records = []
    header: dict = {}
    with path.open("r", encoding="utf-8") as handle:
        for line_no, line in enumerate(handle):
            if not line.strip():
                continue
            try:
                data = json.loads(line)
            except json.JSONDecodeError as exc:
                raise SnapshotCorruptError(f"{path.name} line {line_no + 1}: {exc.msg}")
            if line_no == 0:
                header = data
                _check_header(header, digest, path.name)
                continue
            audio_path = data.get("audio_path")
            records.append(
                SongRecord(
                    id=len(records),
                    title=data["title"],
                    artist=data["artist"],
                    release_date=parse_release_date(data["release_date"]),
                    lyrics=data.get("lyrics", ""),
                    album=data.get("album"),
                    genre=data.get("genre"),
                    audio=Path(audio_path) if audio_path else None,
                )
            )
    return records, header
