"""WAV decode/encode: scaling contract, downmix, and the error taxonomy."""

from __future__ import annotations

import struct

import numpy as np
import pytest

from metatune.errors import CorruptWavError, UnsupportedWavError
from metatune.wavio import decode_wav, encode_wav


def _wav_bytes(payload: bytes, audio_format=1, channels=1, rate=8000, bits=16) -> bytes:
    header = struct.pack(
        "<4sI4s4sIHHIIHH4sI",
        b"RIFF", 36 + len(payload), b"WAVE",
        b"fmt ", 16, audio_format, channels, rate,
        rate * channels * bits // 8, channels * bits // 8, bits,
        b"data", len(payload),
    )
    return header + payload


class TestDecode:
    def test_all_zero_16bit_mono(self):
        payload = struct.pack("<100h", *([0] * 100))
        audio = decode_wav(_wav_bytes(payload))
        assert len(audio) == 100
        assert np.all(audio.samples == 0.0)
        assert audio.sample_rate == 8000

    def test_16bit_scaling_reaches_minus_one(self):
        payload = struct.pack("<2h", -32768, 32767)
        audio = decode_wav(_wav_bytes(payload))
        assert audio.samples[0] == -1.0
        assert audio.samples[1] == 32767 / 32768

    def test_stereo_downmix_averages_channels(self):
        half = 16384  # +0.5 / -0.5 in 16-bit
        payload = struct.pack("<8h", *([half, -half] * 4))
        audio = decode_wav(_wav_bytes(payload, channels=2))
        assert len(audio) == 4
        assert np.all(audio.samples == 0.0)

    def test_8bit_unsigned_scaling(self):
        payload = bytes([0, 128, 255])
        audio = decode_wav(_wav_bytes(payload, bits=8))
        assert audio.samples[0] == -1.0
        assert audio.samples[1] == 0.0
        assert audio.samples[2] == 127 / 128

    def test_24bit_scaling(self):
        # -2^23 and 2^23 - 1 as little-endian 3-byte values
        payload = bytes([0x00, 0x00, 0x80, 0xFF, 0xFF, 0x7F])
        audio = decode_wav(_wav_bytes(payload, bits=24))
        assert audio.samples[0] == -1.0
        assert audio.samples[1] == (2**23 - 1) / 2**23

    def test_float32_passthrough_and_clip(self):
        payload = struct.pack("<4f", 0.25, -0.125, 1.5, -2.0)
        audio = decode_wav(_wav_bytes(payload, audio_format=3, bits=32))
        assert list(audio.samples) == [0.25, -0.125, 1.0, -1.0]

    def test_deterministic(self):
        payload = struct.pack("<50h", *range(50))
        data = _wav_bytes(payload)
        a, b = decode_wav(data), decode_wav(data)
        assert np.array_equal(a.samples, b.samples)

    def test_roundtrip_through_encoder(self):
        rng = np.random.default_rng(3)
        samples = rng.uniform(-1, 1, size=500)
        decoded = decode_wav(encode_wav(samples, 5512, bit_depth=16))
        assert decoded.sample_rate == 5512
        # encode scales by 32767, decode by 32768: error <= 1.5/32768
        assert np.max(np.abs(decoded.samples - samples)) < 5e-5

    def test_float_encode_roundtrip_is_lossless_at_f32(self):
        samples = np.array([0.5, -0.25, 0.0625], dtype=np.float32).astype(np.float64)
        decoded = decode_wav(encode_wav(samples, 44100, bit_depth=32))
        assert list(decoded.samples) == list(samples)


class TestErrors:
    def test_compressed_format_is_unsupported(self):
        data = _wav_bytes(b"\x00" * 16, audio_format=0x0055)  # MP3-in-WAV
        with pytest.raises(UnsupportedWavError):
            decode_wav(data)

    def test_three_channels_unsupported(self):
        with pytest.raises(UnsupportedWavError):
            decode_wav(_wav_bytes(b"\x00" * 12, channels=3))

    def test_truncated_data_chunk_is_corrupt(self):
        data = _wav_bytes(struct.pack("<10h", *([1] * 10)))
        with pytest.raises(CorruptWavError):
            decode_wav(data[:-5])

    def test_bad_magic_is_corrupt(self):
        with pytest.raises(CorruptWavError):
            decode_wav(b"OGGS" + b"\x00" * 64)

    def test_missing_data_chunk_is_corrupt(self):
        header_only = _wav_bytes(b"")[:-8]  # drop the data chunk header
        with pytest.raises(CorruptWavError):
            decode_wav(header_only)

    def test_unsupported_and_corrupt_are_distinct_types(self):
        assert not issubclass(UnsupportedWavError, CorruptWavError)
        assert not issubclass(CorruptWavError, UnsupportedWavError)
