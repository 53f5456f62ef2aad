"""Frame-level aggregation: single frame, column mean, and k-means centroids.

Everything here is deterministic: k-means seeds are temporally stratified
columns, never random, so identical inputs give bit-identical outputs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import FrameMatrix, l2_normalize
from .errors import EmptyMatrix, InsufficientFrames, ZeroVector

DEFAULT_FRAME_INDEX = 30  # ~one second into a 30 fps video

METHODS = ("single_frame", "mean", "kmeans")


@dataclass(frozen=True)
class AggregationConfig:
    method: str = "mean"
    frame_index: int = DEFAULT_FRAME_INDEX  # 1-based, single_frame only
    k: int = 1  # kmeans only
    max_iterations: int = 100
    convergence_tol: float = 1e-6
    normalize_frames_first: bool = True

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown aggregation method {self.method!r}")
        if self.frame_index < 1:
            raise ValueError("frame_index must be >= 1")
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if self.convergence_tol <= 0:
            raise ValueError("convergence_tol must be positive")


@dataclass(frozen=True)
class VideoRepresentation:
    """One (single_frame/mean) or k (kmeans) vectors standing in for a video."""

    video_id: str
    vectors: np.ndarray  # (n_vectors, d)
    method: str

    def __post_init__(self):
        arr = np.asarray(self.vectors, dtype=np.float64)
        if arr.ndim != 2 or arr.shape[0] < 1:
            raise ValueError("vectors must be a non-empty (n, d) matrix")
        if self.method in ("single_frame", "mean") and arr.shape[0] != 1:
            raise ValueError(f"method {self.method!r} must produce exactly one vector")
        object.__setattr__(self, "vectors", arr)


def _prepared(matrix: FrameMatrix, normalize: bool) -> np.ndarray:
    cols = matrix.frames
    if not normalize:
        return cols
    norms = np.linalg.norm(cols, axis=1)
    if np.any(norms < 1e-12):
        raise ZeroVector(f"video {matrix.video_id!r}: zero frame column cannot be normalized")
    return cols / norms[:, None]


def aggregate_single_frame(matrix: FrameMatrix, frame_index: int = DEFAULT_FRAME_INDEX,
                           normalize_frames_first: bool = True) -> VideoRepresentation:
    """Pick the frame at 1-based frame_index, clamped to the last frame."""
    if frame_index < 1:
        raise ValueError("frame_index must be >= 1")
    cols = _prepared(matrix, normalize_frames_first)
    idx = min(frame_index, matrix.frame_count) - 1
    return VideoRepresentation(matrix.video_id, cols[idx : idx + 1].copy(), "single_frame")


def aggregate_mean(matrix: FrameMatrix, normalize_frames_first: bool = True) -> VideoRepresentation:
    """Arithmetic mean over frame columns, optionally normalized per frame first."""
    cols = _prepared(matrix, normalize_frames_first)
    return VideoRepresentation(matrix.video_id, cols.mean(axis=0, keepdims=True), "mean")


def aggregate_kmeans(matrix: FrameMatrix, cfg: AggregationConfig) -> VideoRepresentation:
    """Deterministic Lloyd's iteration over frame columns.

    Seeds are the columns at floor(i*s/k), skipping exact duplicates forward.
    Ties in assignment go to the lowest centroid index; empty clusters are
    reseeded with the column farthest from its current centroid. Output
    centroids are ordered by descending cluster size, then by smallest
    member frame index.
    """
    cols = _prepared(matrix, cfg.normalize_frames_first)
    s = cols.shape[0]
    k = cfg.k
    distinct = np.unique(cols, axis=0).shape[0]
    if distinct < k:
        raise InsufficientFrames(
            f"video {matrix.video_id!r}: {distinct} distinct frames < k={k}"
        )

    centroids = _seed_centroids(cols, k)
    assign = np.zeros(s, dtype=np.int64)
    for _ in range(cfg.max_iterations):
        assign = _assign(cols, centroids)
        assign = _repair_empty(cols, centroids, assign, k)
        new_centroids = np.stack([cols[assign == j].mean(axis=0) for j in range(k)])
        moves = np.linalg.norm(new_centroids - centroids, axis=1)
        centroids = new_centroids
        if np.all(moves < cfg.convergence_tol):
            break

    order = _output_order(assign, k)
    return VideoRepresentation(matrix.video_id, centroids[order], "kmeans")


def _seed_centroids(cols: np.ndarray, k: int) -> np.ndarray:
    s = cols.shape[0]
    seeds: list[np.ndarray] = []
    for i in range(k):
        idx = (i * s) // k
        # scan forward (wrapping) past columns already chosen
        for step in range(s):
            cand = cols[(idx + step) % s]
            if not any(np.array_equal(cand, c) for c in seeds):
                seeds.append(cand)
                break
    return np.stack(seeds)


def _assign(cols: np.ndarray, centroids: np.ndarray) -> np.ndarray:
    d2 = ((cols[:, None, :] - centroids[None, :, :]) ** 2).sum(axis=2)
    # argmin returns the first minimum: ties go to the lowest centroid index
    return d2.argmin(axis=1)


def _repair_empty(cols: np.ndarray, centroids: np.ndarray, assign: np.ndarray, k: int) -> np.ndarray:
    # a repair can empty another cluster by stealing its only member, so loop
    for _ in range(k):
        empty = [j for j in range(k) if not np.any(assign == j)]
        if not empty:
            break
        j = empty[0]
        dists = np.linalg.norm(cols - centroids[assign], axis=1)
        farthest = int(dists.argmax())  # first maximum: deterministic scan order
        centroids[j] = cols[farthest]
        assign = assign.copy()
        assign[farthest] = j
    return assign


def _output_order(assign: np.ndarray, k: int) -> list[int]:
    keyed = []
    for j in range(k):
        members = np.flatnonzero(assign == j)
        keyed.append((-members.size, int(members.min()), j))
    return [j for _, _, j in sorted(keyed)]


def aggregate(matrix: FrameMatrix, cfg: AggregationConfig) -> VideoRepresentation:
    """Dispatch on cfg.method."""
    if cfg.method == "single_frame":
        return aggregate_single_frame(matrix, cfg.frame_index, cfg.normalize_frames_first)
    if cfg.method == "mean":
        return aggregate_mean(matrix, cfg.normalize_frames_first)
    return aggregate_kmeans(matrix, cfg)
