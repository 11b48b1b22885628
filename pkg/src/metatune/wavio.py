"""Minimal WAV (RIFF) decoding and encoding for PCM audio.

Decoding accepts 8/16/24/32-bit integer and 32-bit float PCM, mono or
stereo. Stereo is downmixed by averaging the channels; integer samples are
scaled by 2^(bits-1) so the most negative code maps exactly to -1.0.
Compressed or otherwise exotic containers raise UnsupportedWavError, while
truncated or malformed byte streams raise CorruptWavError — the caller can
tell "we don't decode this" from "this file is broken".

Decoding is deterministic: identical bytes always yield identical samples.
"""

from __future__ import annotations

import struct

import numpy as np

from .errors import CorruptWavError, UnsupportedWavError
from .model import PcmAudio

_FORMAT_PCM = 1
_FORMAT_IEEE_FLOAT = 3
_FORMAT_EXTENSIBLE = 0xFFFE


def decode_wav(data: bytes) -> PcmAudio:
    """Decode a WAV byte string into mono float64 PCM in [-1.0, 1.0]."""
    if len(data) < 12 or data[0:4] != b"RIFF" or data[8:12] != b"WAVE":
        raise CorruptWavError("not a RIFF/WAVE container")

    fmt = None
    frames = None
    pos = 12
    while pos + 8 <= len(data):
        chunk_id = data[pos : pos + 4]
        (chunk_size,) = struct.unpack_from("<I", data, pos + 4)
        body_start = pos + 8
        if chunk_id == b"fmt ":
            if body_start + chunk_size > len(data) or chunk_size < 16:
                raise CorruptWavError("truncated fmt chunk")
            fmt = _parse_fmt(data[body_start : body_start + chunk_size])
        elif chunk_id == b"data":
            if fmt is None:
                raise CorruptWavError("data chunk appears before fmt chunk")
            if body_start + chunk_size > len(data):
                raise CorruptWavError("data chunk extends past end of file")
            frames = data[body_start : body_start + chunk_size]
            break
        # Chunks are word-aligned; odd sizes carry one padding byte.
        pos = body_start + chunk_size + (chunk_size & 1)

    if fmt is None:
        raise CorruptWavError("missing fmt chunk")
    if frames is None:
        raise CorruptWavError("missing data chunk")

    audio_format, channels, sample_rate, bits = fmt
    if channels not in (1, 2):
        raise UnsupportedWavError(f"{channels} channels not supported (mono or stereo only)")
    samples = _decode_samples(frames, audio_format, bits)

    if channels == 2:
        if len(samples) % 2:
            raise CorruptWavError("stereo data chunk has an odd sample count")
        samples = 0.5 * (samples[0::2] + samples[1::2])
    return PcmAudio(samples=samples, sample_rate=sample_rate)


def _parse_fmt(body: bytes) -> tuple[int, int, int, int]:
    audio_format, channels, sample_rate, _, _, bits = struct.unpack_from("<HHIIHH", body, 0)
    if audio_format == _FORMAT_EXTENSIBLE:
        # WAVE_FORMAT_EXTENSIBLE: actual format code is the GUID's first word.
        if len(body) < 26 + 16:
            raise CorruptWavError("extensible fmt chunk too small for a subformat")
        (audio_format,) = struct.unpack_from("<H", body, 24)
    return audio_format, channels, sample_rate, bits


def _decode_samples(frames: bytes, audio_format: int, bits: int) -> np.ndarray:
    if audio_format == _FORMAT_IEEE_FLOAT:
        if bits != 32:
            raise UnsupportedWavError(f"{bits}-bit float WAV not supported")
        if len(frames) % 4:
            raise CorruptWavError("float data chunk size not a multiple of 4")
        values = np.frombuffer(frames, dtype="<f4").astype(np.float64)
        return np.clip(values, -1.0, 1.0)
    if audio_format != _FORMAT_PCM:
        raise UnsupportedWavError(f"WAV format code {audio_format} not supported (PCM only)")

    if bits == 8:
        values = np.frombuffer(frames, dtype=np.uint8).astype(np.float64)
        return (values - 128.0) / 128.0
    if bits == 16:
        if len(frames) % 2:
            raise CorruptWavError("16-bit data chunk size not a multiple of 2")
        values = np.frombuffer(frames, dtype="<i2").astype(np.float64)
        return values / 32768.0
    if bits == 24:
        if len(frames) % 3:
            raise CorruptWavError("24-bit data chunk size not a multiple of 3")
        raw = np.frombuffer(frames, dtype=np.uint8).reshape(-1, 3).astype(np.uint32)
        unsigned = raw[:, 0] | (raw[:, 1] << 8) | (raw[:, 2] << 16)
        signed = unsigned.astype(np.int32)
        signed[signed >= 1 << 23] -= 1 << 24
        return signed.astype(np.float64) / float(1 << 23)
    if bits == 32:
        if len(frames) % 4:
            raise CorruptWavError("32-bit data chunk size not a multiple of 4")
        values = np.frombuffer(frames, dtype="<i4").astype(np.float64)
        return values / float(1 << 31)
    raise UnsupportedWavError(f"{bits}-bit PCM WAV not supported")


def encode_wav(samples: np.ndarray, sample_rate: int, bit_depth: int = 16) -> bytes:
    """Encode samples (1-D mono or (n, channels) array) as a WAV byte string.

    Supports 16-bit PCM and 32-bit float. Inputs are clipped to [-1, 1].
    """
    array = np.asarray(samples, dtype=np.float64)
    if array.ndim == 1:
        array = array[:, np.newaxis]
    if array.ndim != 2 or array.shape[1] not in (1, 2):
        raise ValueError(f"expected mono or stereo samples, got shape {array.shape}")
    channels = array.shape[1]
    clipped = np.clip(array, -1.0, 1.0)

    if bit_depth == 16:
        audio_format = _FORMAT_PCM
        payload = np.round(clipped * 32767.0).astype("<i2").tobytes()
    elif bit_depth == 32:
        audio_format = _FORMAT_IEEE_FLOAT
        payload = clipped.astype("<f4").tobytes()
    else:
        raise ValueError(f"bit_depth must be 16 or 32, got {bit_depth}")

    bytes_per_sample = bit_depth // 8
    header = struct.pack(
        "<4sI4s4sIHHIIHH4sI",
        b"RIFF",
        36 + len(payload),
        b"WAVE",
        b"fmt ",
        16,
        audio_format,
        channels,
        sample_rate,
        sample_rate * channels * bytes_per_sample,
        channels * bytes_per_sample,
        bit_depth,
        b"data",
        len(payload),
    )
    return header + payload
