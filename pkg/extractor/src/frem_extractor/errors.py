class ExtractorError(Exception):
    """Base class for extraction errors."""


class DecodeError(ExtractorError):
    """Video file cannot be opened or decoded."""


class EmptyVideo(ExtractorError):
    """Decodable container with zero frames."""


class ModelLoadError(ExtractorError):
    """Pretrained encoder weights could not be loaded."""


class PolicyError(ExtractorError):
    """Unparseable or invalid frame sampling policy."""
