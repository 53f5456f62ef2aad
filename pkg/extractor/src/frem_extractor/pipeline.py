"""Batch encoding of sampled frames and captions into .frem archives.

Raw (unnormalized) encoder outputs are stored; the retrieval engine owns
the normalization decision. Every archive gets a JSON sidecar recording
the model, sampling policy, and batch size for auditability.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .archive import write_archive
from .encoder import DEFAULT_MODEL, ImageTextEncoder
from .frames import Frame, SamplingPolicy, extract_frames


@dataclass(frozen=True)
class ExtractionConfig:
    model_id: str = DEFAULT_MODEL
    policy: SamplingPolicy = SamplingPolicy("all_frames")
    batch_size: int = 32
    device: str = "cpu"

    def __post_init__(self):
        if self.batch_size < 1:
            raise ValueError("batch_size must be >= 1")


def _batches(items: Sequence, size: int):
    for start in range(0, len(items), size):
        yield items[start : start + size]


def encode_frames(video_frames: Iterable[tuple[str, list[Frame]]],
                  encoder: ImageTextEncoder,
                  cfg: ExtractionConfig) -> tuple[list[str], np.ndarray]:
    """(ids, matrix) for a role-'frame' archive; ids are 'videoId#frameIndex'."""
    ids: list[str] = []
    images = []
    for video_id, frames in video_frames:
        for frame in frames:
            ids.append(f"{video_id}#{frame.index}")
            images.append(frame.image)
    rows = [encoder.encode_images(batch) for batch in _batches(images, cfg.batch_size)]
    return ids, np.concatenate(rows).astype(np.float32)


def encode_texts(captions: Sequence[tuple[str, str]],
                 encoder: ImageTextEncoder,
                 cfg: ExtractionConfig) -> tuple[list[str], np.ndarray]:
    """(ids, matrix) for a role-'text' archive; empty captions are flagged."""
    for cid, text in captions:
        if not text.strip():
            warnings.warn(f"caption {cid!r} is empty; encoding start/end tokens only")
    ids = [cid for cid, _ in captions]
    texts = [text for _, text in captions]
    rows = [encoder.encode_texts(batch) for batch in _batches(texts, cfg.batch_size)]
    return ids, np.concatenate(rows).astype(np.float32)


def extract_video_dir(video_dir, video_ids: Sequence[str], cfg: ExtractionConfig,
                      extensions: tuple[str, ...] = (".mp4", ".avi", ".mkv", ".webm")):
    """Decode and sample each manifest video found under video_dir."""
    video_dir = Path(video_dir)
    for video_id in video_ids:
        for ext in extensions:
            path = video_dir / f"{video_id}{ext}"
            if path.exists():
                yield video_id, extract_frames(path, cfg.policy)
                break
        else:
            raise FileNotFoundError(f"no video file for {video_id!r} in {video_dir}")


def write_with_sidecar(ids, matrix, role, path, cfg: ExtractionConfig, encoder_id: str) -> None:
    write_archive(ids, matrix, role, path)
    sidecar = {
        "model_id": encoder_id,
        "role": role,
        "sampling_policy": cfg.policy.describe(),
        "batch_size": cfg.batch_size,
        "preprocessing": "model-published pipeline",
        "normalized": False,
        "count": len(ids),
        "dimension": int(matrix.shape[1]),
    }
    Path(str(path) + ".meta.json").write_text(json.dumps(sidecar, indent=2, sort_keys=True) + "\n")


def load_manifest_records(path) -> list[dict]:
    """Minimal reader for the engine's .jsonl manifest schema."""
    records = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                records.append(json.loads(line))
    return records
