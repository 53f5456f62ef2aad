"""Video decoding and frame sampling policies."""

from __future__ import annotations

from dataclasses import dataclass

import cv2
import numpy as np

from .errors import DecodeError, EmptyVideo, PolicyError


@dataclass(frozen=True)
class SamplingPolicy:
    kind: str  # all_frames | fps | uniform
    rate: float | None = None  # fps only
    count: int | None = None  # uniform only

    def __post_init__(self):
        if self.kind not in ("all_frames", "fps", "uniform"):
            raise PolicyError(f"unknown sampling policy {self.kind!r}")
        if self.kind == "fps" and (self.rate is None or self.rate <= 0):
            raise PolicyError("fps policy needs a positive rate")
        if self.kind == "uniform" and (self.count is None or self.count < 1):
            raise PolicyError("uniform policy needs a positive count")

    def describe(self) -> str:
        if self.kind == "fps":
            return f"fps:{self.rate:g}"
        if self.kind == "uniform":
            return f"uniform:{self.count}"
        return "all"


def parse_policy(spec: str) -> SamplingPolicy:
    """'all' | 'fps:N' | 'uniform:N'."""
    if spec == "all":
        return SamplingPolicy("all_frames")
    head, sep, tail = spec.partition(":")
    if sep:
        try:
            if head == "fps":
                return SamplingPolicy("fps", rate=float(tail))
            if head == "uniform":
                return SamplingPolicy("uniform", count=int(tail))
        except ValueError as e:
            raise PolicyError(f"bad policy parameter in {spec!r}") from e
    raise PolicyError(f"cannot parse sampling policy {spec!r}")


@dataclass(frozen=True)
class Frame:
    index: int  # 1-based position in the decoded stream
    image: np.ndarray  # HxWx3 RGB uint8


def extract_frames(video_path, policy: SamplingPolicy) -> list[Frame]:
    """Decode a video and apply the sampling policy; temporal order preserved."""
    capture = cv2.VideoCapture(str(video_path))
    if not capture.isOpened():
        raise DecodeError(f"cannot open {video_path}")
    source_fps = capture.get(cv2.CAP_PROP_FPS) or 0.0
    frames: list[Frame] = []
    index = 0
    try:
        while True:
            ok, image = capture.read()
            if not ok:
                break
            index += 1
            frames.append(Frame(index, cv2.cvtColor(image, cv2.COLOR_BGR2RGB)))
    finally:
        capture.release()
    if not frames:
        raise EmptyVideo(f"{video_path}: no decodable frames")
    return _apply_policy(frames, policy, source_fps)


def _apply_policy(frames: list[Frame], policy: SamplingPolicy, source_fps: float) -> list[Frame]:
    if policy.kind == "all_frames":
        return frames
    if policy.kind == "uniform":
        count = min(policy.count, len(frames))
        positions = np.linspace(0, len(frames) - 1, count)
        picked = sorted({int(round(p)) for p in positions})
        return [frames[p] for p in picked]
    # fps: keep the first frame of each 1/rate-second bucket of source time
    if source_fps <= 0:
        source_fps = 30.0  # container did not report a rate
    kept, last_bucket = [], -1
    for f in frames:
        bucket = int((f.index - 1) / source_fps * policy.rate)
        if bucket != last_bucket:
            kept.append(f)
            last_bucket = bucket
    return kept
