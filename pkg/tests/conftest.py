"""Shared fixtures: tiny corpora and prebuilt engines reused across modules."""

from __future__ import annotations

import pytest

from metatune.engine import SearchEngine
from metatune.synth import audio_lookup, make_corpus


@pytest.fixture(scope="session")
def small_corpus():
    """10 synthetic songs with audio, deterministic."""
    return make_corpus(10, seed=1234)


@pytest.fixture(scope="session")
def small_engine(small_corpus):
    records, audio = small_corpus
    return SearchEngine.build(records, audio_for=audio_lookup(audio))
