"""Deterministic audio fingerprint extraction.

A song's fingerprint is an ordered sequence of 32-bit sub-fingerprints, one
per analysis frame from the second frame on. Audio is resampled to 5512 Hz,
cut into 2048-sample Hann-windowed frames with a 64-sample hop, reduced to
33 logarithmically spaced band energies between 300 and 2000 Hz, and each
bit encodes the sign of the band-energy difference change between adjacent
bands across consecutive frames. The construction depends only on energy
ratios, so scaling the waveform leaves the bits untouched, and one-hop time
shifts just shift the sequence by one position.

The extractor is pure and bit-reproducible: band energies accumulate with
compensated summation (math.fsum) in ascending bin order, so results do not
depend on summation order or platform reduction quirks. It sits behind a
plain PcmAudio -> FingerprintSequence interface; a different extractor can
be substituted without touching the index.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import asdict, dataclass
from functools import lru_cache
from pathlib import Path

import numpy as np

from .errors import AudioTooShortError
from .model import PcmAudio

#: Bits per sub-fingerprint; fixed by the 33-band layout (32 adjacent pairs).
SUBFP_BITS = 32


@dataclass(frozen=True)
class ExtractorConfig:
    """Timing and band layout of the extractor.

    band_count must stay 33: the bit rule compares adjacent band pairs, and
    33 bands give exactly the 32 pairs that fill a sub-fingerprint word.
    """

    target_rate: int = 5512
    frame_length: int = 2048
    hop: int = 64
    band_count: int = 33
    min_freq: float = 300.0
    max_freq: float = 2000.0
    window: str = "hann"

    def __post_init__(self):
        if self.target_rate <= 0:
            raise ValueError("target_rate must be positive")
        if not 0 < self.hop < self.frame_length:
            raise ValueError("hop must be positive and smaller than frame_length")
        if self.band_count != SUBFP_BITS + 1:
            raise ValueError(f"band_count must be {SUBFP_BITS + 1} for 32-bit sub-fingerprints")
        if not 0 < self.min_freq < self.max_freq:
            raise ValueError("need 0 < min_freq < max_freq")
        if self.max_freq > self.target_rate / 2:
            raise ValueError("max_freq above the Nyquist frequency of target_rate")
        if self.window != "hann":
            raise ValueError(f"unsupported window {self.window!r}")

    def band_edges(self) -> np.ndarray:
        """34 logarithmically spaced band edges spanning [min_freq, max_freq]."""
        return np.geomspace(self.min_freq, self.max_freq, self.band_count + 1)

    def frame_count(self, n_samples: int) -> int:
        if n_samples < self.frame_length:
            return 0
        return (n_samples - self.frame_length) // self.hop + 1


@dataclass(frozen=True, eq=False)
class FingerprintSequence:
    """Ordered 32-bit sub-fingerprint words for one song or one query clip."""

    words: np.ndarray
    song: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "words", np.asarray(self.words, dtype=np.uint32))

    def __len__(self) -> int:
        return len(self.words)


@lru_cache(maxsize=8)
def _hann_window(length: int) -> np.ndarray:
    k = np.arange(length, dtype=np.float64)
    window = 0.5 - 0.5 * np.cos(2.0 * np.pi * k / (length - 1))
    window.flags.writeable = False
    return window


@lru_cache(maxsize=8)
def _band_bin_bounds(config: ExtractorConfig) -> tuple[int, ...]:
    """Per-band [start, stop) rfft bin boundaries; bin k sits at k*rate/frame."""
    bin_freqs = np.arange(config.frame_length // 2 + 1) * (
        config.target_rate / config.frame_length
    )
    bounds = np.searchsorted(bin_freqs, config.band_edges(), side="left")
    return tuple(int(b) for b in bounds)


def resample(audio: PcmAudio, target_rate: int) -> PcmAudio:
    """Linear-interpolation resampling; returns the input unchanged if rates match."""
    if target_rate <= 0:
        raise ValueError("target_rate must be positive")
    if audio.sample_rate == target_rate:
        return audio
    n_in = len(audio.samples)
    if n_in == 0:
        return PcmAudio(samples=np.zeros(0), sample_rate=target_rate)
    # Output grid: sample k maps to source position k * source/target, kept
    # inside [0, n_in - 1] so no extrapolation happens.
    n_out = (n_in - 1) * target_rate // audio.sample_rate + 1
    positions = np.arange(n_out, dtype=np.float64) * (audio.sample_rate / target_rate)
    samples = np.interp(positions, np.arange(n_in, dtype=np.float64), audio.samples)
    return PcmAudio(samples=samples, sample_rate=target_rate)


def band_energies(frame: np.ndarray, config: ExtractorConfig) -> np.ndarray:
    """Band energies of one already-windowed frame.

    Returns 33 non-negative values; band b sums squared spectrum magnitudes
    over rfft bins whose center frequency falls in [edge_b, edge_b+1).
    """
    frame = np.asarray(frame, dtype=np.float64)
    if frame.shape != (config.frame_length,):
        raise ValueError(f"frame must have length {config.frame_length}, got {frame.shape}")
    spectrum = np.fft.rfft(frame)
    power = spectrum.real * spectrum.real + spectrum.imag * spectrum.imag
    bounds = _band_bin_bounds(config)
    energies = np.empty(config.band_count, dtype=np.float64)
    for band in range(config.band_count):
        energies[band] = math.fsum(power[bounds[band] : bounds[band + 1]].tolist())
    return energies


def derive_bits(current: np.ndarray, previous: np.ndarray) -> int:
    """Pack the 32 band-pair difference signs into one word.

    Bit m (LSB = m 0) is 1 iff the band-m-minus-band-m+1 energy difference
    strictly grew from the previous frame to the current one. Exactly equal
    energies give 0, so identical frames always produce the zero word.
    """
    current = np.asarray(current, dtype=np.float64)
    previous = np.asarray(previous, dtype=np.float64)
    if current.shape != previous.shape or current.shape != (SUBFP_BITS + 1,):
        raise ValueError(f"expected two vectors of {SUBFP_BITS + 1} energies")
    change = (current[:-1] - current[1:]) - (previous[:-1] - previous[1:])
    bits = (change > 0.0).astype(np.uint32)
    word = np.bitwise_or.reduce(bits << np.arange(SUBFP_BITS, dtype=np.uint32))
    return int(word)


def extract(audio: PcmAudio, config: ExtractorConfig = ExtractorConfig()) -> FingerprintSequence:
    """Fingerprint a PCM signal: one 32-bit word per frame after the first.

    Raises AudioTooShortError when the resampled signal spans fewer than two
    frames; silence of sufficient length is legal and yields zero words.
    """
    resampled = resample(audio, config.target_rate)
    samples = resampled.samples
    n_frames = config.frame_count(len(samples))
    if n_frames < 2:
        raise AudioTooShortError(
            f"audio spans {n_frames} analysis frame(s) after resampling; "
            f"need at least 2 ({config.frame_length + config.hop} samples "
            f"at {config.target_rate} Hz)"
        )
    window = _hann_window(config.frame_length)
    words = np.empty(n_frames - 1, dtype=np.uint32)
    previous = band_energies(samples[: config.frame_length] * window, config)
    for i in range(1, n_frames):
        start = i * config.hop
        current = band_energies(samples[start : start + config.frame_length] * window, config)
        words[i - 1] = derive_bits(current, previous)
        previous = current
    return FingerprintSequence(words=words)


def extractor_digest(config: ExtractorConfig) -> str:
    """Stable hash of the extractor parameters, used in fingerprint file headers."""
    canonical = json.dumps(asdict(config), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def write_fingerprint_file(path: str | Path, words: np.ndarray, config: ExtractorConfig) -> None:
    """One hexadecimal 32-bit word per line, preceded by a config-digest header."""
    lines = [f"# extractor-config {extractor_digest(config)}"]
    lines += [f"{int(w):08x}" for w in np.asarray(words, dtype=np.uint32)]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_fingerprint_file(path: str | Path, config: ExtractorConfig) -> np.ndarray:
    """Read a fingerprint file, refusing one written under a different config."""
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    if not lines or not lines[0].startswith("# extractor-config "):
        raise ValueError(f"{path}: missing config-digest header")
    digest = lines[0].split()[-1]
    if digest != extractor_digest(config):
        raise ValueError(f"{path}: written under a different extractor config")
    return np.array([int(line, 16) for line in lines[1:] if line.strip()], dtype=np.uint32)
