"""Deterministic synthetic corpora for tests, demos, and evaluation runs.

Audio experiments should not require licensed music, so make_corpus()
builds songs from seeded mixtures: a broadband amplitude-modulated noise
bed with a few slowly sweeping chirp voices on top. The bed keeps every
analysis band signal-dominated — like real music and unlike a bare tone
mixture — so moderate amounts of added query noise perturb the fingerprint
bits only slightly, while the sweeps and the bed's own fluctuation keep
consecutive frames different (a stationary tone would fingerprint as
all-zero words). Different seeds give effectively independent fingerprint
sequences, so songs stay mutually distinguishable.

Everything is a pure function of the seed: same seed, same corpus, same
WAV bytes, same experiment results.
"""

from __future__ import annotations

from datetime import date
from typing import Mapping

import numpy as np

from .model import PcmAudio, SongRecord

_TITLE_WORDS = [
    "river", "ember", "night", "glass", "echo", "velvet", "summer", "winter",
    "neon", "golden", "silver", "thunder", "lantern", "shadow", "crystal",
    "harbor", "meadow", "comet", "ocean", "wildfire", "paper", "hollow",
]

_ARTIST_FIRST = ["Ada", "Marlow", "Juno", "Felix", "Iris", "Silas", "Nova", "Ezra", "Lena", "Otis"]
_ARTIST_LAST = ["Hart", "Vale", "Quinn", "Reyes", "Stone", "Mercer", "Banks", "Frost", "Lune", "Wolfe"]

_GENRES = [
    "synthpop", "folk", "indie", "electronic", "jazz",
    "ambient", "country", "soul", "disco", "blues",
]

_LYRIC_WORDS = [
    "run", "fall", "light", "fire", "cold", "gone", "home", "lost", "alive",
    "dream", "heart", "stars", "rain", "road", "wild", "young", "blue",
    "slow", "burn", "break", "fly", "falling", "tonight", "forever", "city",
    "dance", "midnight", "sky", "wave", "storm", "quiet", "loud", "return",
    "ghost", "candle", "mirror", "window", "garden", "diamond", "smoke",
]


def _song_audio(rng: np.random.Generator, duration_s: float, sample_rate: int) -> PcmAudio:
    """One song: an AM'd broadband bed plus 3 chirp voices, peak 0.7."""
    n = int(round(duration_s * sample_rate))
    t = np.arange(n, dtype=np.float64) / sample_rate
    bed_am = 1.0 + 0.25 * np.sin(
        2.0 * np.pi * (rng.uniform(0.1, 0.9) * t + rng.uniform(0.0, 1.0))
    )
    x = 0.35 * bed_am * rng.uniform(-1.0, 1.0, size=n)
    for _ in range(3):
        f0, f1 = np.exp(rng.uniform(np.log(320.0), np.log(1900.0), size=2))
        sweep_rate = (f1 - f0) / duration_s
        phase = rng.uniform(0.0, 1.0)
        amp = rng.uniform(0.12, 0.25)
        am_rate = rng.uniform(0.2, 2.0)
        am_phase = rng.uniform(0.0, 1.0)
        am = 1.0 + 0.3 * np.sin(2.0 * np.pi * (am_rate * t + am_phase))
        x += amp * am * np.sin(2.0 * np.pi * (f0 * t + 0.5 * sweep_rate * t * t + phase))
    x *= 0.7 / np.max(np.abs(x))
    return PcmAudio(samples=x, sample_rate=sample_rate)


def _song_lyrics(rng: np.random.Generator) -> str:
    verse = rng.choice(_LYRIC_WORDS, size=int(rng.integers(25, 45)))
    chorus = rng.choice(_LYRIC_WORDS, size=int(rng.integers(4, 7)))
    lines = [" ".join(verse)]
    lines += [" ".join(chorus)] * 3  # choruses repeat; tf-idf should reward that
    return "\n".join(lines)


def make_corpus(
    n_songs: int,
    seed: int = 0,
    with_audio: bool = True,
    duration_range: tuple[float, float] = (8.0, 12.0),
    sample_rate: int = 5512,
) -> tuple[list[SongRecord], dict[int, PcmAudio]]:
    """Build n_songs records (ids 0..n-1) and, optionally, their audio."""
    rng = np.random.default_rng(seed)
    records = []
    audio: dict[int, PcmAudio] = {}
    for song_id in range(n_songs):
        title = " ".join(rng.choice(_TITLE_WORDS, size=int(rng.integers(1, 4)), replace=False)).title()
        artist = f"{rng.choice(_ARTIST_FIRST)} {rng.choice(_ARTIST_LAST)}"
        album = " ".join(rng.choice(_TITLE_WORDS, size=2, replace=False)).title()
        released = date(
            int(rng.integers(1960, 2024)), int(rng.integers(1, 13)), int(rng.integers(1, 29))
        )
        records.append(
            SongRecord(
                id=song_id,
                title=title,
                artist=artist,
                album=album,
                genre=str(rng.choice(_GENRES)),
                release_date=released,
                lyrics=_song_lyrics(rng),
            )
        )
        if with_audio:
            duration = rng.uniform(*duration_range)
            audio[song_id] = _song_audio(rng, duration, sample_rate)
    return records, audio


def audio_lookup(audio: Mapping[int, PcmAudio]):
    """audio_for callable over an in-memory audio map (for SearchEngine.build)."""

    def audio_for(record: SongRecord) -> PcmAudio | None:
        return audio.get(record.id)

    return audio_for
