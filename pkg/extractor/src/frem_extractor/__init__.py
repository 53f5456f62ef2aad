"""frem_extractor: pretrained image-text encoding into .frem embedding archives."""

from .archive import write_archive
from .encoder import ClipEncoder, HashEncoder, make_encoder
from .frames import Frame, SamplingPolicy, extract_frames, parse_policy
from .pipeline import (
    ExtractionConfig,
    encode_frames,
    encode_texts,
    extract_video_dir,
    write_with_sidecar,
)

__version__ = "0.1.0"
