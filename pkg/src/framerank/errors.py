"""Exception types shared across the engine."""


class FrameRankError(Exception):
    """Base class for all engine errors."""


class ZeroVector(FrameRankError):
    """A vector with (near-)zero norm where a direction is required."""


class DimensionMismatch(FrameRankError):
    """Vectors or matrices with incompatible dimensions."""


class EmptyInput(FrameRankError):
    """An operation received an empty sequence it cannot handle."""


class EmptyMatrix(FrameRankError):
    """A frame matrix with no columns."""


class InsufficientFrames(FrameRankError):
    """Fewer distinct frame columns than requested clusters."""


class IndexOutOfRange(FrameRankError):
    """Target index outside the score vector."""


class MissingGroundTruth(FrameRankError):
    """A query has no ground-truth gallery entry (or it is absent from the gallery)."""


class EmptyGroup(FrameRankError):
    """A video group with no rank entries, or an entry without a group."""


class MisalignedVectors(FrameRankError):
    """Rank vectors that do not share length and query identifiers."""


class EmptyRanks(FrameRankError):
    """Metrics requested over an empty rank vector."""


class FormatError(FrameRankError):
    """Bad magic, version, or structural field in an archive file."""


class TruncatedFile(FrameRankError):
    """Archive file ends before its declared payload."""


class DuplicateId(FrameRankError):
    """Repeated identifier where uniqueness is required."""


class ParseError(FrameRankError):
    """Manifest line that cannot be parsed; carries the line number."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class MissingField(ParseError):
    """Manifest record lacking a required field."""


class UnknownSplit(FrameRankError):
    """Split name not present in the manifest."""


class EmptySplit(FrameRankError):
    """Split selection produced no entries."""


class MalformedFrameId(FrameRankError):
    """Frame archive id not of the form 'videoId#frameIndex'."""


class MissingDuration(FrameRankError):
    """Ranked video without a duration in the manifest."""


class IntegrityError(FrameRankError):
    """Referential mismatch between archives and the manifest split."""


class NonContiguousIndexWarning(UserWarning):
    """Frame indices for a video have gaps (allowed, but worth noticing)."""
