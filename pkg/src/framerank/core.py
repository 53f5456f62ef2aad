"""Vector and matrix primitives: normalization, cosine similarity, batched similarity.

All arithmetic accumulates in float64 regardless of input dtype so that
results are reproducible to 1e-6 across platforms and implementations.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import DimensionMismatch, EmptyInput, EmptyMatrix, ZeroVector

ZERO_NORM = 1e-12

#: Default embedding dimension (CLIP ViT-B/32); carried as data, never assumed.
DEFAULT_DIM = 512


def as_vector(v) -> np.ndarray:
    """Coerce to a 1-D float64 array and validate finiteness."""
    arr = np.asarray(v, dtype=np.float64)
    if arr.ndim != 1:
        raise DimensionMismatch(f"expected a 1-D vector, got shape {arr.shape}")
    if arr.size == 0:
        raise EmptyInput("zero-dimensional vector")
    if not np.all(np.isfinite(arr)):
        raise ValueError("vector contains NaN or Inf")
    return arr


@dataclass(frozen=True)
class FrameMatrix:
    """Per-video stack of frame embeddings; row i is frame i (0-based storage)."""

    video_id: str
    frames: np.ndarray  # (s, d) float64

    def __post_init__(self):
        arr = np.asarray(self.frames, dtype=np.float64)
        if arr.ndim != 2 or arr.shape[0] < 1:
            raise EmptyMatrix(f"video {self.video_id!r}: need at least one frame row")
        if not np.all(np.isfinite(arr)):
            raise ValueError(f"video {self.video_id!r}: non-finite frame values")
        object.__setattr__(self, "frames", arr)

    @property
    def frame_count(self) -> int:
        return self.frames.shape[0]

    @property
    def dim(self) -> int:
        return self.frames.shape[1]


@dataclass(frozen=True)
class SimilarityMatrix:
    """Dense query x gallery cosine scores with aligned identifiers."""

    scores: np.ndarray  # (n_query, n_gallery) float64
    query_ids: tuple[str, ...]
    gallery_ids: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "query_ids", tuple(self.query_ids))
        object.__setattr__(self, "gallery_ids", tuple(self.gallery_ids))
        if self.scores.shape != (len(self.query_ids), len(self.gallery_ids)):
            raise DimensionMismatch(
                f"scores shape {self.scores.shape} does not match "
                f"{len(self.query_ids)} queries x {len(self.gallery_ids)} gallery entries"
            )


def l2_normalize(v) -> np.ndarray:
    """Scale v to unit Euclidean norm. Raises ZeroVector below 1e-12."""
    arr = as_vector(v)
    norm = float(np.linalg.norm(arr))
    if norm < ZERO_NORM:
        raise ZeroVector(f"cannot normalize a vector with norm {norm:g}")
    return arr / norm


def cosine_similarity(a, b) -> float:
    """a.b / (|a||b|), accumulated in float64."""
    va, vb = as_vector(a), as_vector(b)
    if va.shape != vb.shape:
        raise DimensionMismatch(f"dimensions differ: {va.shape[0]} vs {vb.shape[0]}")
    na, nb = float(np.linalg.norm(va)), float(np.linalg.norm(vb))
    if na < ZERO_NORM or nb < ZERO_NORM:
        raise ZeroVector("cosine similarity undefined for zero vectors")
    return float(np.dot(va, vb) / (na * nb))


def _stack(vectors: Sequence, what: str) -> np.ndarray:
    if len(vectors) == 0:
        raise EmptyInput(f"no {what} vectors")
    rows = [as_vector(v) for v in vectors]
    dims = {r.shape[0] for r in rows}
    if len(dims) != 1:
        raise DimensionMismatch(f"{what} vectors have mixed dimensions {sorted(dims)}")
    return np.stack(rows)


def similarity_matrix(
    queries: Sequence,
    gallery: Sequence,
    query_ids: Sequence[str] | None = None,
    gallery_ids: Sequence[str] | None = None,
) -> SimilarityMatrix:
    """All-pairs cosine similarity, equivalent to looping cosine_similarity.

    Identifiers default to stringified positions when not supplied.
    """
    q = _stack(queries, "query")
    g = _stack(gallery, "gallery")
    if q.shape[1] != g.shape[1]:
        raise DimensionMismatch(
            f"query dimension {q.shape[1]} vs gallery dimension {g.shape[1]}"
        )
    qn = np.linalg.norm(q, axis=1)
    gn = np.linalg.norm(g, axis=1)
    if np.any(qn < ZERO_NORM) or np.any(gn < ZERO_NORM):
        raise ZeroVector("zero vector in similarity_matrix input")
    scores = (q / qn[:, None]) @ (g / gn[:, None]).T
    if query_ids is None:
        query_ids = [str(i) for i in range(q.shape[0])]
    if gallery_ids is None:
        gallery_ids = [str(j) for j in range(g.shape[0])]
    return SimilarityMatrix(scores=scores, query_ids=tuple(query_ids), gallery_ids=tuple(gallery_ids))
