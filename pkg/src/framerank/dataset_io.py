"""Embedding archives (.frem), corpus manifests (.jsonl), and split selection.

Archive layout, all little-endian:
    magic "FREM" | version u16 = 1 | role u8 | dimension u32 | count u64
    id table: count entries of u16 length-prefixed UTF-8
    values: count * dimension float32, row-major

Manifest: one JSON record per line with video_id, captions (array of
{caption_id, text}), duration_seconds, split.
"""

from __future__ import annotations

import json
import struct
import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .core import FrameMatrix
from .errors import (
    DimensionMismatch,
    DuplicateId,
    EmptySplit,
    FormatError,
    MalformedFrameId,
    MissingField,
    NonContiguousIndexWarning,
    ParseError,
    TruncatedFile,
    UnknownSplit,
)

MAGIC = b"FREM"
VERSION = 1
ROLES = ("frame", "video", "text")
_ROLE_CODE = {name: i for i, name in enumerate(ROLES)}

_HEADER = struct.Struct("<4sHBIQ")


@dataclass(frozen=True)
class EmbeddingArchive:
    """Id-keyed embedding matrix; float32 on disk, count x d in memory."""

    ids: tuple[str, ...]
    matrix: np.ndarray
    role: str

    def __post_init__(self):
        object.__setattr__(self, "ids", tuple(self.ids))
        arr = np.ascontiguousarray(self.matrix, dtype=np.float32)
        object.__setattr__(self, "matrix", arr)
        if self.role not in ROLES:
            raise FormatError(f"unknown archive role {self.role!r}")
        if arr.ndim != 2:
            raise DimensionMismatch(f"matrix must be 2-D, got shape {arr.shape}")
        if arr.shape[0] != len(self.ids):
            raise DimensionMismatch(
                f"{len(self.ids)} ids but {arr.shape[0]} matrix rows"
            )
        seen = set()
        for i in self.ids:
            if i in seen:
                raise DuplicateId(f"archive id {i!r} repeated")
            seen.add(i)

    @property
    def dim(self) -> int:
        return self.matrix.shape[1]

    def row(self, archive_id: str) -> np.ndarray:
        return self.matrix[self.ids.index(archive_id)]


def write_embedding_archive(archive: EmbeddingArchive, path) -> None:
    count, dim = archive.matrix.shape
    chunks = [_HEADER.pack(MAGIC, VERSION, _ROLE_CODE[archive.role], dim, count)]
    for i in archive.ids:
        raw = i.encode("utf-8")
        if len(raw) > 0xFFFF:
            raise FormatError(f"id longer than 65535 bytes: {i[:40]!r}...")
        chunks.append(struct.pack("<H", len(raw)))
        chunks.append(raw)
    chunks.append(archive.matrix.astype("<f4", copy=False).tobytes())
    Path(path).write_bytes(b"".join(chunks))


def read_embedding_archive(path) -> EmbeddingArchive:
    data = Path(path).read_bytes()
    if len(data) < _HEADER.size:
        raise TruncatedFile(f"{path}: shorter than the fixed header")
    magic, version, role_code, dim, count = _HEADER.unpack_from(data, 0)
    if magic != MAGIC:
        raise FormatError(f"{path}: bad magic {magic!r}")
    if version != VERSION:
        raise FormatError(f"{path}: unsupported version {version}")
    if role_code >= len(ROLES):
        raise FormatError(f"{path}: unknown role code {role_code}")
    offset = _HEADER.size
    ids = []
    for _ in range(count):
        if offset + 2 > len(data):
            raise TruncatedFile(f"{path}: id table cut short")
        (length,) = struct.unpack_from("<H", data, offset)
        offset += 2
        if offset + length > len(data):
            raise TruncatedFile(f"{path}: id table cut short")
        try:
            ids.append(data[offset : offset + length].decode("utf-8"))
        except UnicodeDecodeError as e:
            raise FormatError(f"{path}: id table is not valid UTF-8: {e}") from e
        offset += length
    payload = count * dim * 4
    if offset + payload > len(data):
        raise TruncatedFile(f"{path}: value block cut short")
    matrix = np.frombuffer(data, dtype="<f4", count=count * dim, offset=offset).reshape(count, dim)
    return EmbeddingArchive(ids=tuple(ids), matrix=matrix.copy(), role=ROLES[role_code])


@dataclass(frozen=True)
class VideoEntry:
    video_id: str
    captions: tuple[tuple[str, str], ...]  # (caption_id, text)
    duration_seconds: float
    split: str


@dataclass(frozen=True)
class CorpusManifest:
    name: str
    entries: tuple[VideoEntry, ...]

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(self.entries))

    def video_ids(self) -> list[str]:
        return [e.video_id for e in self.entries]

    def caption_pairs(self) -> list[tuple[str, str]]:
        """(caption_id, video_id) for every caption, in manifest order."""
        return [(cid, e.video_id) for e in self.entries for cid, _ in e.captions]

    def caption_texts(self) -> dict[str, str]:
        return {cid: text for e in self.entries for cid, text in e.captions}

    def durations(self) -> dict[str, float]:
        return {e.video_id: e.duration_seconds for e in self.entries}

    def split_names(self) -> set[str]:
        return {e.split for e in self.entries}


def load_manifest(path, name: str | None = None) -> CorpusManifest:
    entries = []
    seen_videos: set[str] = set()
    seen_captions: set[str] = set()
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as e:
                raise ParseError(f"invalid JSON: {e.msg}", line=lineno) from e
            entries.append(_parse_entry(record, lineno, seen_videos, seen_captions))
    return CorpusManifest(name=name or Path(path).stem, entries=tuple(entries))


def _parse_entry(record, lineno, seen_videos, seen_captions) -> VideoEntry:
    if not isinstance(record, dict):
        raise ParseError("record is not a JSON object", line=lineno)
    for key in ("video_id", "captions", "duration_seconds", "split"):
        if key not in record:
            raise MissingField(f"missing field {key!r}", line=lineno)
    video_id = record["video_id"]
    if not isinstance(video_id, str) or not video_id:
        raise ParseError("video_id must be a non-empty string", line=lineno)
    if video_id in seen_videos:
        raise ParseError(f"duplicate video_id {video_id!r}", line=lineno)
    seen_videos.add(video_id)

    raw_captions = record["captions"]
    if not isinstance(raw_captions, list) or not raw_captions:
        raise ParseError(f"video {video_id!r} needs at least one caption", line=lineno)
    captions = []
    for cap in raw_captions:
        if not isinstance(cap, dict) or "caption_id" not in cap or "text" not in cap:
            raise MissingField("caption needs caption_id and text", line=lineno)
        cid = cap["caption_id"]
        if cid in seen_captions:
            raise ParseError(f"duplicate caption_id {cid!r}", line=lineno)
        seen_captions.add(cid)
        captions.append((cid, cap["text"]))

    duration = record["duration_seconds"]
    if not isinstance(duration, (int, float)) or duration < 0:
        raise ParseError("duration_seconds must be a non-negative number", line=lineno)
    return VideoEntry(
        video_id=video_id,
        captions=tuple(captions),
        duration_seconds=float(duration),
        split=str(record["split"]),
    )


def read_id_list(path) -> list[str]:
    """Plain-text id list, one id per line, blanks skipped."""
    with open(path, encoding="utf-8") as fh:
        return [line.strip() for line in fh if line.strip()]


def select_split(manifest: CorpusManifest, split_name: str,
                 id_list: Sequence[str] | None = None) -> CorpusManifest:
    """Filter to one split tag; an explicit id list restricts it further.

    The id list is how externally defined subsets (e.g. a 1000-video test
    selection) are applied: membership is always an input artifact, never
    recomputed here.
    """
    if split_name not in manifest.split_names():
        raise UnknownSplit(
            f"split {split_name!r} not in manifest (has {sorted(manifest.split_names())})"
        )
    selected = [e for e in manifest.entries if e.split == split_name]
    if id_list is not None:
        wanted = set(id_list)
        selected = [e for e in selected if e.video_id in wanted]
    if not selected:
        raise EmptySplit(f"split {split_name!r} selected no videos")
    return CorpusManifest(name=f"{manifest.name}:{split_name}", entries=tuple(selected))


def parse_frame_id(archive_id: str) -> tuple[str, int]:
    """Split 'videoId#frameIndex' on the last '#'."""
    video_id, sep, idx = archive_id.rpartition("#")
    if not sep or not video_id:
        raise MalformedFrameId(f"frame id {archive_id!r} lacks a '#' separator")
    if not idx.isdigit():
        raise MalformedFrameId(f"frame id {archive_id!r} has a non-integer index")
    return video_id, int(idx)


def group_frames_by_video(archive: EmbeddingArchive) -> list[FrameMatrix]:
    """One FrameMatrix per video, columns sorted by frame index, videos by id.

    Gaps in frame indices are allowed but flagged with NonContiguousIndexWarning.
    """
    if archive.role != "frame":
        raise FormatError(f"expected a frame archive, got role {archive.role!r}")
    per_video: dict[str, list[tuple[int, int]]] = {}
    for row, archive_id in enumerate(archive.ids):
        video_id, frame_idx = parse_frame_id(archive_id)
        per_video.setdefault(video_id, []).append((frame_idx, row))
    matrices = []
    for video_id in sorted(per_video):
        pairs = sorted(per_video[video_id])
        indices = [p[0] for p in pairs]
        if indices != list(range(indices[0], indices[0] + len(indices))):
            warnings.warn(
                f"video {video_id!r} has non-contiguous frame indices",
                NonContiguousIndexWarning,
                stacklevel=2,
            )
        rows = [p[1] for p in pairs]
        matrices.append(FrameMatrix(video_id=video_id, frames=archive.matrix[rows].astype(np.float64)))
    return matrices


def check_referential_integrity(manifest: CorpusManifest,
                                video_ids: Iterable[str],
                                caption_ids: Iterable[str]) -> list[str]:
    """Ids the selected split needs but the archives lack (empty means consistent)."""
    missing = []
    have_videos = set(video_ids)
    have_captions = set(caption_ids)
    for e in manifest.entries:
        if e.video_id not in have_videos:
            missing.append(f"video {e.video_id!r} missing from video archive")
        for cid, _ in e.captions:
            if cid not in have_captions:
                missing.append(f"caption {cid!r} missing from text archive")
    return missing
