"""Snapshot persistence: bit-identical round trips and the failure taxonomy."""

from __future__ import annotations

import json

import numpy as np
import pytest

from metatune.engine import EngineConfig, SearchEngine
from metatune.errors import (
    DigestMismatchError,
    MissingManifestError,
    VersionMismatchError,
)
from metatune.fpindex import FpIndexConfig
from metatune.model import FieldKind, Query
from metatune.storage import config_digest, load_indexes, persist_indexes
from metatune.synth import audio_lookup, make_corpus


@pytest.fixture(scope="module")
def snapshot(tmp_path_factory, small_engine):
    directory = tmp_path_factory.mktemp("snap")
    persist_indexes(small_engine, directory)
    return directory


class TestRoundTrip:
    def test_indexes_bit_identical(self, snapshot, small_engine):
        loaded = load_indexes(snapshot)
        assert loaded.fp_index == small_engine.fp_index
        for field in FieldKind:
            if field is FieldKind.AUDIO:
                continue
            original = small_engine.text_indexes[field]
            restored = loaded.text_indexes[field]
            assert restored.postings == original.postings
            assert restored.document_frequency == original.document_frequency
            assert restored.doc_lengths == original.doc_lengths
            assert restored.doc_count == original.doc_count
            assert restored.profile == original.profile
        assert [r.title for r in loaded.records] == [r.title for r in small_engine.records]

    def test_search_results_identical_for_random_queries(self, snapshot, small_engine, small_corpus):
        records, audio = small_corpus
        loaded = load_indexes(snapshot)
        rng = np.random.default_rng(100)
        words = [w for r in records for w in r.lyrics.split()]
        for _ in range(25):
            query = Query(lyrics=" ".join(rng.choice(words, size=3)))
            a = small_engine.execute(query).to_dict(include_timing=False)
            b = loaded.execute(query).to_dict(include_timing=False)
            assert a == b

    def test_persist_is_idempotent(self, snapshot, small_engine, tmp_path):
        persist_indexes(small_engine, tmp_path)
        for name in ("manifest.json", "fingerprints.json", "text_lyrics.json"):
            assert (tmp_path / name).read_bytes() == (snapshot / name).read_bytes()


class TestFailureModes:
    def test_empty_directory_missing_manifest(self, tmp_path):
        with pytest.raises(MissingManifestError):
            load_indexes(tmp_path)

    def test_partial_persist_without_manifest_fails(self, snapshot, tmp_path):
        # Simulate a crash before the manifest write: copy all but manifest.
        for path in snapshot.iterdir():
            if path.name != "manifest.json":
                (tmp_path / path.name).write_bytes(path.read_bytes())
        with pytest.raises(MissingManifestError):
            load_indexes(tmp_path)

    def test_version_mismatch_refused(self, snapshot, tmp_path):
        for path in snapshot.iterdir():
            (tmp_path / path.name).write_bytes(path.read_bytes())
        manifest = json.loads((tmp_path / "manifest.json").read_text())
        manifest["format_version"] = 99
        (tmp_path / "manifest.json").write_text(json.dumps(manifest))
        with pytest.raises(VersionMismatchError):
            load_indexes(tmp_path)

    def test_config_tamper_digest_mismatch(self, snapshot, tmp_path):
        """A snapshot whose stored config was altered must be refused."""
        for path in snapshot.iterdir():
            (tmp_path / path.name).write_bytes(path.read_bytes())
        payload = json.loads((tmp_path / "fingerprints.json").read_text())
        payload["config"]["toggle_bits"] = 2
        (tmp_path / "fingerprints.json").write_text(json.dumps(payload))
        with pytest.raises(DigestMismatchError):
            load_indexes(tmp_path)

    def test_mixed_snapshot_files_digest_mismatch(self, snapshot, tmp_path, small_corpus):
        """Files from a snapshot built under another config are refused."""
        records, audio = small_corpus
        other_engine = SearchEngine.build(
            records,
            audio_for=audio_lookup(audio),
            config=EngineConfig(fp=FpIndexConfig(toggle_bits=0)),
        )
        other_dir = tmp_path / "other"
        persist_indexes(other_engine, other_dir)
        mixed = tmp_path / "mixed"
        mixed.mkdir()
        for path in snapshot.iterdir():
            (mixed / path.name).write_bytes(path.read_bytes())
        # Swap in the fingerprint file from the other snapshot.
        (mixed / "fingerprints.json").write_bytes((other_dir / "fingerprints.json").read_bytes())
        with pytest.raises(DigestMismatchError):
            load_indexes(mixed)

    def test_digest_depends_on_config(self, small_engine):
        base = config_digest(small_engine.config)
        changed = config_digest(
            EngineConfig(
                profiles=small_engine.config.profiles,
                extractor=small_engine.config.extractor,
                fp=FpIndexConfig(toggle_bits=2),
            )
        )
        assert base != changed
