"""Exception types shared across the metatune package.

Distinct classes exist wherever callers need to tell failure modes apart:
a too-short audio clip is not the same as a silent one, an unsupported WAV
encoding is not the same as a truncated file, and a query that tokenizes
to nothing is not the same as a query with no matches.
"""

from __future__ import annotations


class MetatuneError(Exception):
    """Base class for all metatune errors."""


class CorpusError(MetatuneError):
    """Corpus file cannot be read or parsed (carries the offending line)."""


class RecordValidationError(CorpusError):
    """A corpus record violates the record invariants.

    Attributes:
        index: zero-based record index within the corpus file.
        violations: human-readable descriptions of each violated invariant.
    """

    def __init__(self, index: int, violations: list[str]):
        self.index = index
        self.violations = violations
        super().__init__(f"record {index}: " + "; ".join(violations))


class WavError(MetatuneError):
    """Base class for WAV decoding failures."""


class UnsupportedWavError(WavError):
    """The container is a valid WAV but uses an encoding we do not decode."""


class CorruptWavError(WavError):
    """The byte stream is not a well-formed WAV container (truncated, bad magic)."""


class SnapshotError(MetatuneError):
    """Base class for index snapshot persistence failures."""


class MissingManifestError(SnapshotError):
    """No manifest in the snapshot directory (never written, or a partial persist)."""


class VersionMismatchError(SnapshotError):
    """Snapshot format version differs from what this build writes."""


class DigestMismatchError(SnapshotError):
    """Config digest in the snapshot does not match its own files or the expectation."""


class SnapshotCorruptError(SnapshotError):
    """A snapshot file exists but cannot be parsed."""


class DuplicateSongError(MetatuneError):
    """Attempt to index the same song id twice in one index."""


class AudioTooShortError(MetatuneError):
    """Audio yields fewer than two analysis frames, so no sub-fingerprints exist.

    Deliberately distinct from silence: all-zero audio of sufficient length
    is legal and produces all-zero sub-fingerprints.
    """


class EmptyTextQueryError(MetatuneError):
    """Query text tokenized to no terms (distinct from a query with no matches)."""


class QueryValidationError(MetatuneError):
    """The query violates its invariants; carries the violation list."""

    def __init__(self, violations: list[str]):
        self.violations = violations
        super().__init__("; ".join(violations))


class QueryFieldError(MetatuneError):
    """A per-field search failed; identifies which field so callers can report it."""

    def __init__(self, field, message: str):
        self.field = field
        super().__init__(f"{getattr(field, 'value', field)}: {message}")


class WeightError(MetatuneError):
    """Merge weights are invalid (do not sum to 1, or do not match the fields)."""


class ZeroPowerSignalError(MetatuneError):
    """SNR is undefined for a zero-power signal."""
