"""Extractor behavior: resampling, band energies, bit rule, and invariances.

The golden test pins the extractor output on a frozen fixture twice over:
once against the committed file, and the file itself against an independent
direct-DFT re-implementation. Together they guarantee the shipped FFT path
computes the same bits as a from-scratch spectral analysis.
"""

from __future__ import annotations

import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from oracles import golden_signal, oracle_extract

from metatune.errors import AudioTooShortError
from metatune.fingerprint import (
    ExtractorConfig,
    band_energies,
    derive_bits,
    extract,
    extractor_digest,
    read_fingerprint_file,
    resample,
    write_fingerprint_file,
    _hann_window,
)
from metatune.model import PcmAudio

CFG = ExtractorConfig()
GOLDEN_FILE = Path(__file__).parent / "data" / "golden_chirp.txt"


def _tone(freq_cycle_samples: int, n_periods: int, amp: float = 0.5) -> np.ndarray:
    """A strictly periodic tone built by tiling one period (bit-identical frames)."""
    period = amp * np.sin(2 * np.pi * np.arange(freq_cycle_samples) / freq_cycle_samples)
    return np.tile(period, n_periods)


class TestResample:
    def test_identity_when_rates_match(self):
        audio = PcmAudio(np.linspace(-1, 1, 100), 5512)
        assert resample(audio, 5512) is audio

    def test_constant_signal_stays_constant(self):
        audio = PcmAudio(np.full(1000, 0.25), 44100)
        out = resample(audio, 5512)
        assert np.all(out.samples == 0.25)
        assert out.sample_rate == 5512

    def test_halving_rate_halves_length(self):
        for n in (1000, 1001, 4242):
            audio = PcmAudio(np.zeros(n), 11024)
            out = resample(audio, 5512)
            assert abs(len(out.samples) - n // 2) <= 1

    def test_interpolation_hits_midpoints(self):
        audio = PcmAudio(np.array([0.0, 1.0, 0.0, 1.0, 0.0]), 2)
        out = resample(audio, 4)
        assert out.samples[1] == 0.5


class TestBandEnergies:
    def test_zero_frame_gives_zero_bands(self):
        assert np.all(band_energies(np.zeros(CFG.frame_length), CFG) == 0.0)

    def test_pure_sine_lands_in_its_band(self):
        """Energy concentrates in the band containing the tone, others < 1e-6 relative."""
        edges = CFG.band_edges()
        # Bin-centered frequency inside band 10 keeps leakage at the Hann minimum.
        target = float(np.sqrt(edges[10] * edges[11]))
        bin_index = round(target * CFG.frame_length / CFG.target_rate)
        freq = bin_index * CFG.target_rate / CFG.frame_length
        assert edges[10] <= freq < edges[11]
        t = np.arange(CFG.frame_length) / CFG.target_rate
        frame = np.sin(2 * np.pi * freq * t) * _hann_window(CFG.frame_length)
        energies = band_energies(frame, CFG)
        others = np.delete(energies, 10)
        assert np.all(others < 1e-6 * energies[10])

    def test_matches_direct_dft_oracle_on_sine(self):
        t = np.arange(CFG.frame_length) / CFG.target_rate
        frame = np.sin(2 * np.pi * 700.0 * t) * _hann_window(CFG.frame_length)
        lib = band_energies(frame, CFG)
        # Direct DFT of the same frame (oracle_extract core, single frame).
        bins = CFG.frame_length // 2 + 1
        k = np.arange(CFG.frame_length)
        angles = 2 * np.pi * np.outer(np.arange(bins), k) / CFG.frame_length
        spectrum = frame @ np.cos(angles).T - 1j * (frame @ np.sin(angles).T)
        power = spectrum.real**2 + spectrum.imag**2
        bin_freqs = np.arange(bins) * CFG.target_rate / CFG.frame_length
        edges = CFG.band_edges()
        oracle = np.array(
            [
                power[(bin_freqs >= edges[b]) & (bin_freqs < edges[b + 1])].sum()
                for b in range(CFG.band_count)
            ]
        )
        assert np.allclose(lib, oracle, rtol=1e-9, atol=1e-9 * power.max())

    def test_scaling_frame_scales_energy_quadratically(self):
        rng = np.random.default_rng(5)
        frame = rng.uniform(-1, 1, CFG.frame_length)
        one = band_energies(frame, CFG)
        four = band_energies(2.0 * frame, CFG)
        assert np.array_equal(four, 4.0 * one)  # power-of-two scaling is exact


class TestDeriveBits:
    def test_equal_energies_give_zero_word(self):
        e = np.linspace(1, 33, 33)
        assert derive_bits(e, e) == 0

    def test_constant_offset_cancels(self):
        e = np.linspace(1, 33, 33)
        assert derive_bits(e + 5.0, e) == 0

    def test_single_pair_change_sets_single_bit(self):
        previous = np.zeros(33)
        current = np.zeros(33)
        current[0] = 2.0
        assert derive_bits(current, previous) == 1  # only bit 0

    def test_bit_positions_follow_band_pairs(self):
        previous = np.zeros(33)
        current = np.zeros(33)
        current[7] = 1.0  # raises pair 7 (bit 7) and lowers pair 6 (bit 6 stays 0)
        word = derive_bits(current, previous)
        assert word == 1 << 7


class TestExtract:
    def test_stationary_tone_zero_words(self):
        # Period 16 divides the hop, so every frame is sample-identical.
        samples = _tone(16, (3 * CFG.target_rate) // 16)
        seq = extract(PcmAudio(samples, CFG.target_rate), CFG)
        assert len(seq) == CFG.frame_count(len(samples)) - 1
        assert np.all(seq.words == 0)

    def test_exactly_one_frame_is_too_short(self):
        with pytest.raises(AudioTooShortError):
            extract(PcmAudio(np.zeros(CFG.frame_length), CFG.target_rate), CFG)

    def test_silence_of_sufficient_length_is_legal(self):
        seq = extract(PcmAudio(np.zeros(CFG.frame_length + CFG.hop), CFG.target_rate), CFG)
        assert len(seq) == 1 and seq.words[0] == 0

    def test_length_formula_on_random_lengths(self):
        rng = np.random.default_rng(17)
        for _ in range(50):
            n = int(rng.integers(0, 30000))
            audio = PcmAudio(rng.uniform(-0.5, 0.5, n), CFG.target_rate)
            frames = CFG.frame_count(n)
            if frames < 2:
                with pytest.raises(AudioTooShortError):
                    extract(audio, CFG)
            else:
                assert len(extract(audio, CFG)) == frames - 1

    def test_one_hop_shift_shifts_sequence(self):
        rng = np.random.default_rng(23)
        samples = rng.uniform(-0.5, 0.5, 20000)
        original = extract(PcmAudio(samples, CFG.target_rate), CFG).words
        shifted = extract(PcmAudio(samples[CFG.hop :], CFG.target_rate), CFG).words
        assert np.array_equal(original[1:], shifted)

    def test_determinism(self):
        sig = golden_signal(CFG)[:20000]
        a = extract(PcmAudio(sig, CFG.target_rate), CFG).words
        b = extract(PcmAudio(sig.copy(), CFG.target_rate), CFG).words
        assert np.array_equal(a, b)


class TestGoldenChirp:
    def test_extract_matches_frozen_file(self):
        golden = read_fingerprint_file(GOLDEN_FILE, CFG)
        words = extract(PcmAudio(golden_signal(CFG), CFG.target_rate), CFG).words
        assert np.array_equal(words, golden)

    def test_frozen_file_matches_independent_dft_oracle(self):
        golden = read_fingerprint_file(GOLDEN_FILE, CFG)
        assert np.array_equal(oracle_extract(golden_signal(CFG), CFG), golden)

    def test_amplitude_invariance_bit_exact(self):
        """Power-of-two gains leave every bit untouched (exact float scaling)."""
        signal = golden_signal(CFG)
        reference = extract(PcmAudio(signal, CFG.target_rate), CFG).words
        for gain in (0.5, 2.0):
            scaled = extract(PcmAudio(signal * gain, CFG.target_rate), CFG).words
            assert np.array_equal(scaled, reference)

    def test_fingerprint_file_header_guards_config(self):
        other = ExtractorConfig(hop=128)
        with pytest.raises(ValueError):
            read_fingerprint_file(GOLDEN_FILE, other)

    def test_fingerprint_file_roundtrip(self, tmp_path):
        words = np.array([0, 1, 0xDEADBEEF, 2**32 - 1], dtype=np.uint32)
        path = tmp_path / "fp.txt"
        write_fingerprint_file(path, words, CFG)
        assert np.array_equal(read_fingerprint_file(path, CFG), words)
        assert extractor_digest(CFG) in path.read_text().splitlines()[0]
