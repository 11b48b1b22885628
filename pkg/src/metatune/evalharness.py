"""Reproducible evaluation experiments: noise robustness and parameter sweeps.

Experiments measure recall@1 and recall@5 of audio search under seeded
white-noise corruption, and sweep one parameter at a time (text n-gram
size, fingerprint toggle bits, coarse match threshold, BER threshold)
while holding everything else fixed. All randomness flows from explicit
seeds, so a report's recall columns regenerate identically; measured
latency is wall-clock and excluded from the reproducibility contract.

White noise is uniform, not Gaussian: the spectrum is equally flat, the
samples are trivially bounded, and seeded generation stays simple. The
noise vector is rescaled to its empirical power, so the requested SNR is
hit essentially exactly (well within 0.1 dB) before clipping.

Query clips snap to the analysis hop so that an uncorrupted clip
reproduces the stored frames sample-for-sample and self-matches with
similarity exactly 1.0; noise robustness is then measured in isolation
from time-misalignment effects.
"""

from __future__ import annotations

import csv
import io
import json
import math
import time
from dataclasses import dataclass, field as dc_field, replace
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from .errors import MetatuneError, ZeroPowerSignalError
from .fingerprint import ExtractorConfig, FingerprintSequence, extract
from .fpindex import SUBFP_BITS, FingerprintIndex, FpIndexConfig
from .model import PcmAudio, SongRecord
from .textindex import FieldProfile, TextIndex, tokenize

#: Sentinel for the no-noise control level.
NO_NOISE = math.inf


@dataclass(frozen=True)
class NoiseSpec:
    """Fully determines a noise realization given the signal it is added to."""

    snr_db: float
    seed: int


def add_white_noise(audio: PcmAudio, spec: NoiseSpec) -> PcmAudio:
    """Add seeded zero-mean uniform noise at the requested SNR, clipped to [-1, 1].

    snr_db = inf returns the input unchanged (the control condition).
    Raises ZeroPowerSignalError for all-zero signals, where SNR is undefined.
    """
    if spec.snr_db == NO_NOISE:
        return audio
    signal_power = float(np.mean(audio.samples**2))
    if signal_power == 0.0:
        raise ZeroPowerSignalError("SNR is undefined for a zero-power signal")
    target_power = signal_power / 10.0 ** (spec.snr_db / 10.0)
    raw = np.random.default_rng(spec.seed).uniform(-1.0, 1.0, size=len(audio.samples))
    raw -= raw.mean()
    noise = raw * math.sqrt(target_power / float(np.mean(raw**2)))
    mixed = np.clip(audio.samples + noise, -1.0, 1.0)
    return PcmAudio(samples=mixed, sample_rate=audio.sample_rate)


@dataclass
class EvalRow:
    """One experiment condition and its aggregate metrics."""

    params: dict
    recall_at_1: float = 0.0
    recall_at_5: float = 0.0
    mean_latency_ms: float = 0.0
    n_queries: int = 0
    n_errors: int = 0
    error: str | None = None

    def deterministic_dict(self) -> dict:
        """Everything except wall-clock latency: the reproducible part."""
        return {
            **self.params,
            "recall_at_1": self.recall_at_1,
            "recall_at_5": self.recall_at_5,
            "n_queries": self.n_queries,
            "n_errors": self.n_errors,
            "error": self.error,
        }


@dataclass
class EvalReport:
    rows: list[EvalRow] = dc_field(default_factory=list)

    def deterministic_rows(self) -> list[dict]:
        return [row.deterministic_dict() for row in self.rows]

    def to_csv(self) -> str:
        param_keys: list[str] = []
        for row in self.rows:
            for key in row.params:
                if key not in param_keys:
                    param_keys.append(key)
        metric_keys = ["recall_at_1", "recall_at_5", "mean_latency_ms", "n_queries", "n_errors", "error"]
        buffer = io.StringIO()
        writer = csv.writer(buffer)
        writer.writerow(param_keys + metric_keys)
        for row in self.rows:
            writer.writerow(
                [row.params.get(k, "") for k in param_keys]
                + [row.recall_at_1, row.recall_at_5, round(row.mean_latency_ms, 3),
                   row.n_queries, row.n_errors, row.error or ""]
            )
        return buffer.getvalue()

    def write(self, directory: str | Path, name: str = "report") -> None:
        """Emit the CSV table and a structured summary next to it."""
        directory = Path(directory)
        directory.mkdir(parents=True, exist_ok=True)
        (directory / f"{name}.csv").write_text(self.to_csv(), encoding="utf-8")
        summary = {"rows": self.deterministic_rows()}
        (directory / f"{name}.json").write_text(json.dumps(summary, indent=2), encoding="utf-8")


def _clip_starts(
    audio: Mapping[int, PcmAudio],
    clip_len: int,
    hop: int,
    queries_per_song: int,
    seed: int,
) -> list[tuple[int, int]]:
    """Deterministic hop-aligned (song, start) pairs, songs in id order."""
    rng = np.random.default_rng(seed)
    pairs = []
    for song in sorted(audio):
        slots = (len(audio[song].samples) - clip_len) // hop
        if slots < 0:
            continue
        for _ in range(queries_per_song):
            pairs.append((song, hop * int(rng.integers(0, slots + 1))))
    return pairs


def _noise_seed(seed: int, song: int, trial_index: int, level_index: int) -> int:
    # Decorrelates noise across songs/trials/levels while staying reproducible.
    return (seed * 1_000_003 + song * 8191 + trial_index * 131 + level_index) & 0x7FFFFFFF


def noise_recall_experiment(
    fp_index: FingerprintIndex,
    audio: Mapping[int, PcmAudio],
    snr_dbs: Sequence[float],
    clip_seconds: float = 3.0,
    queries_per_song: int = 1,
    seed: int = 0,
    extractor: ExtractorConfig = ExtractorConfig(),
) -> EvalReport:
    """Recall of the true song for noisy clips, one report row per SNR level.

    The same clips are reused across SNR levels (paired design); search
    errors count as misses and are reported separately per row.
    """
    clip_len = int(round(clip_seconds * extractor.target_rate))
    pairs = _clip_starts(audio, clip_len, extractor.hop, queries_per_song, seed)
    report = EvalReport()
    for level_index, snr_db in enumerate(snr_dbs):
        hits1 = hits5 = errors = 0
        latencies = []
        for trial_index, (song, start) in enumerate(pairs):
            clip = PcmAudio(
                samples=audio[song].samples[start : start + clip_len],
                sample_rate=extractor.target_rate,
            )
            spec = NoiseSpec(snr_db, _noise_seed(seed, song, trial_index, level_index))
            begin = time.perf_counter()
            try:
                noisy = add_white_noise(clip, spec)
                results = fp_index.search(extract(noisy, extractor), limit=5)
            except MetatuneError:
                errors += 1
                latencies.append((time.perf_counter() - begin) * 1000.0)
                continue
            latencies.append((time.perf_counter() - begin) * 1000.0)
            ranked = [s for s, _ in results]
            if ranked[:1] == [song]:
                hits1 += 1
            if song in ranked[:5]:
                hits5 += 1
        n = len(pairs)
        report.rows.append(
            EvalRow(
                params={"snr_db": snr_db},
                recall_at_1=hits1 / n if n else 0.0,
                recall_at_5=hits5 / n if n else 0.0,
                mean_latency_ms=float(np.mean(latencies)) if latencies else 0.0,
                n_queries=n,
                n_errors=errors,
            )
        )
    return report


def smoothed(values: Sequence[float], window: int = 2) -> list[float]:
    """Moving average used when asserting monotone trends on noisy curves."""
    out = []
    for i in range(len(values) - window + 1):
        out.append(float(np.mean(values[i : i + window])))
    return out


# ----------------------------------------------------------------------
# Parameter sweeps
# ----------------------------------------------------------------------

@dataclass
class AudioExperiment:
    """Fixed setting for audio-parameter sweeps.

    flip_bits corrupts every query word by flipping exactly that many bit
    positions (positions rotate deterministically with the word index);
    snr_db < inf additionally mixes noise into the clips.
    """

    audio: Mapping[int, PcmAudio]
    extractor: ExtractorConfig = ExtractorConfig()
    fp: FpIndexConfig = FpIndexConfig()
    clip_seconds: float = 3.0
    queries_per_song: int = 1
    seed: int = 0
    snr_db: float = NO_NOISE
    flip_bits: int = 0


@dataclass
class PhraseExperiment:
    """Fixed setting for the text n-gram sweep: phrase queries with known answers."""

    records: list[SongRecord]
    phrases: list[tuple[str, int]]  # (query phrase, true song id)
    profile: FieldProfile


SWEEPABLE = ("ngram_N", "toggle_bits", "coarse_min_matches", "ber_threshold")


def sweep(parameter: str, values: Sequence, experiment) -> EvalReport:
    """One report row per value of `parameter`, everything else fixed.

    ngram_N expects a PhraseExperiment; the fingerprint parameters expect an
    AudioExperiment. Invalid values produce an error row instead of raising.
    """
    if parameter not in SWEEPABLE:
        raise ValueError(f"unknown sweep parameter {parameter!r}; choose from {SWEEPABLE}")
    if parameter == "ngram_N":
        return _sweep_ngram(values, experiment)
    return _sweep_fingerprint(parameter, values, experiment)


def _flip_mask(word_index: int, flip_bits: int) -> int:
    mask = 0
    for j in range(flip_bits):
        mask |= 1 << ((word_index + 13 * j) % SUBFP_BITS)
    return mask


def _audio_queries(experiment: AudioExperiment) -> list[tuple[int, FingerprintSequence]]:
    """(true song, corrupted query sequence) pairs for the fixed experiment."""
    ex = experiment
    clip_len = int(round(ex.clip_seconds * ex.extractor.target_rate))
    pairs = _clip_starts(ex.audio, clip_len, ex.extractor.hop, ex.queries_per_song, ex.seed)
    queries = []
    for trial_index, (song, start) in enumerate(pairs):
        clip = PcmAudio(
            samples=ex.audio[song].samples[start : start + clip_len],
            sample_rate=ex.extractor.target_rate,
        )
        if ex.snr_db != NO_NOISE:
            clip = add_white_noise(clip, NoiseSpec(ex.snr_db, _noise_seed(ex.seed, song, trial_index, 0)))
        seq = extract(clip, ex.extractor)
        if ex.flip_bits:
            words = seq.words.copy()
            for i in range(len(words)):
                words[i] ^= np.uint32(_flip_mask(i, ex.flip_bits))
            seq = FingerprintSequence(words)
        queries.append((song, seq))
    return queries


def _run_audio_queries(
    fp_index: FingerprintIndex, queries: list[tuple[int, FingerprintSequence]], params: dict
) -> EvalRow:
    hits1 = hits5 = errors = 0
    latencies = []
    for song, seq in queries:
        begin = time.perf_counter()
        try:
            results = fp_index.search(seq, limit=5)
        except MetatuneError:
            errors += 1
            latencies.append((time.perf_counter() - begin) * 1000.0)
            continue
        latencies.append((time.perf_counter() - begin) * 1000.0)
        ranked = [s for s, _ in results]
        if ranked[:1] == [song]:
            hits1 += 1
        if song in ranked[:5]:
            hits5 += 1
    n = len(queries)
    return EvalRow(
        params=params,
        recall_at_1=hits1 / n if n else 0.0,
        recall_at_5=hits5 / n if n else 0.0,
        mean_latency_ms=float(np.mean(latencies)) if latencies else 0.0,
        n_queries=n,
        n_errors=errors,
    )


def _sweep_fingerprint(parameter: str, values: Sequence, ex: AudioExperiment) -> EvalReport:
    sequences = {
        song: extract(pcm, ex.extractor) for song, pcm in sorted(ex.audio.items())
    }
    queries = _audio_queries(ex)
    report = EvalReport()
    index_cache: dict[int, FingerprintIndex] = {}

    def index_for(config: FpIndexConfig) -> FingerprintIndex:
        # The key map depends only on toggle_bits; other knobs are query-time.
        if config.toggle_bits not in index_cache:
            idx = FingerprintIndex(config)
            for song, seq in sequences.items():
                idx.insert_song(song, seq)
            idx.freeze()
            index_cache[config.toggle_bits] = idx
        idx = index_cache[config.toggle_bits]
        idx.config = config
        return idx

    for value in values:
        params = {parameter: value}
        try:
            config = replace(ex.fp, **{parameter: value})
        except ValueError as exc:
            report.rows.append(EvalRow(params=params, error=str(exc)))
            continue
        report.rows.append(_run_audio_queries(index_for(config), queries, params))
    return report


def _sweep_ngram(values: Sequence, ex: PhraseExperiment) -> EvalReport:
    report = EvalReport()
    for value in values:
        params = {"ngram_N": value}
        try:
            profile = replace(ex.profile, ngram_max=int(value))
        except ValueError as exc:
            report.rows.append(EvalRow(params=params, error=str(exc)))
            continue
        index = TextIndex(profile)
        for record in ex.records:
            index.index_document(record.id, record.text_for(profile.field) or "")
        index.freeze()
        hits1 = hits5 = errors = 0
        latencies = []
        for phrase, true_song in ex.phrases:
            begin = time.perf_counter()
            try:
                results = index.search(phrase, limit=5)
            except MetatuneError:
                errors += 1
                latencies.append((time.perf_counter() - begin) * 1000.0)
                continue
            latencies.append((time.perf_counter() - begin) * 1000.0)
            ranked = [s for s, _ in results]
            if ranked[:1] == [true_song]:
                hits1 += 1
            if true_song in ranked[:5]:
                hits5 += 1
        n = len(ex.phrases)
        report.rows.append(
            EvalRow(
                params=params,
                recall_at_1=hits1 / n if n else 0.0,
                recall_at_5=hits5 / n if n else 0.0,
                mean_latency_ms=float(np.mean(latencies)) if latencies else 0.0,
                n_queries=n,
                n_errors=errors,
            )
        )
    return report


def make_phrase_suite(
    records: Sequence[SongRecord], profile: FieldProfile, seed: int = 0, per_song: int = 1
) -> list[tuple[str, int]]:
    """Sample adjacent-token bigram phrases from each record's field text."""
    rng = np.random.default_rng(seed)
    phrases = []
    for record in records:
        tokens = tokenize(record.text_for(profile.field) or "", profile)
        if len(tokens) < 2:
            continue
        for _ in range(per_song):
            start = int(rng.integers(0, len(tokens) - 1))
            phrases.append((f"{tokens[start]} {tokens[start + 1]}", record.id))
    return phrases
