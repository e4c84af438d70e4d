"""
Custom exceptions for the chunking workbench.
"""


class CDCException(Exception):
    """Base exception for chunking and deduplication errors."""

    pass


class ConfigurationError(CDCException):
    """Raised when a chunker configuration or a setting is invalid."""

    pass


class ChunkingError(CDCException):
    """Raised when a chunker cannot be built or run for a configuration."""

    pass


class BitOpsError(CDCException):
    """Raised when a bit-manipulation helper gets an out-of-range argument."""

    pass


class FingerprintIndexError(CDCException):
    """Raised when a persisted fingerprint index cannot be read or written."""

    pass


class DedupError(CDCException):
    """Raised when deduplication metrics cannot be computed."""

    pass


class CorpusError(CDCException):
    """Raised when a corpus cannot be generated or read."""

    pass


class TunerError(CDCException):
    """Raised when the parameter search finds no acceptable candidate."""

    pass


class InvariantViolation(CDCException):
    """Raised when a self-check finds boundaries that break a chunking invariant."""

    pass
