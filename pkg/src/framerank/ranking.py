"""Rank assignment under the evaluation protocols.

Three layers: plain per-query ranking, min-rank collapse over a video's
captions, and min-rank across k centroid galleries. Ties in scores are
broken by gallery index precedence (earlier entries win), which keeps
runs with duplicated embeddings deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .core import SimilarityMatrix
from .errors import (
    EmptyGroup,
    EmptyRanks,
    IndexOutOfRange,
    MisalignedVectors,
    MissingGroundTruth,
)


@dataclass(frozen=True)
class GroundTruth:
    """queryId -> matching galleryId, plus optional galleryId -> videoId grouping."""

    targets: Mapping[str, str]
    grouping: Mapping[str, str] | None = None


@dataclass(frozen=True)
class RankVector:
    """1-based ranks aligned with query identifiers."""

    ranks: np.ndarray  # (n,) int64
    query_ids: tuple[str, ...]

    def __post_init__(self):
        arr = np.asarray(self.ranks, dtype=np.int64)
        object.__setattr__(self, "ranks", arr)
        object.__setattr__(self, "query_ids", tuple(self.query_ids))
        if arr.ndim != 1 or arr.shape[0] != len(self.query_ids):
            raise MisalignedVectors("ranks and query_ids lengths differ")
        if arr.size and arr.min() < 1:
            raise ValueError("ranks are 1-based positive integers")

    def __len__(self) -> int:
        return len(self.query_ids)


def rank_of_target(scores: Sequence[float], target_index: int) -> int:
    """1-based rank of scores[target_index] under descending sort.

    rank = 1 + #{j: scores[j] > s_t} + #{j < target: scores[j] == s_t}
    """
    arr = np.asarray(scores, dtype=np.float64)
    if not (0 <= target_index < arr.shape[0]):
        raise IndexOutOfRange(f"target {target_index} outside {arr.shape[0]} scores")
    if not np.all(np.isfinite(arr)):
        raise ValueError("scores contain NaN or Inf")
    target = arr[target_index]
    higher = int(np.count_nonzero(arr > target))
    earlier_ties = int(np.count_nonzero(arr[:target_index] == target))
    return 1 + higher + earlier_ties


def rank_queries(sim: SimilarityMatrix, gt: GroundTruth) -> RankVector:
    """Rank the ground-truth gallery entry for every query row."""
    gallery_index = {gid: j for j, gid in enumerate(sim.gallery_ids)}
    ranks = np.empty(len(sim.query_ids), dtype=np.int64)
    for i, qid in enumerate(sim.query_ids):
        target_id = gt.targets.get(qid)
        if target_id is None:
            raise MissingGroundTruth(f"query {qid!r} has no ground-truth entry")
        j = gallery_index.get(target_id)
        if j is None:
            raise MissingGroundTruth(
                f"ground truth {target_id!r} for query {qid!r} not in gallery"
            )
        ranks[i] = rank_of_target(sim.scores[i], j)
    return RankVector(ranks=ranks, query_ids=sim.query_ids)


def collapse_min_rank_by_video(ranks: RankVector, grouping: Mapping[str, str]) -> RankVector:
    """Minimum rank per video over its caption entries.

    grouping maps each rank entry's id to its video id; output order is
    first appearance of each video in the input.
    """
    if len(ranks) == 0:
        raise EmptyRanks("cannot collapse an empty rank vector")
    video_order: list[str] = []
    best: dict[str, int] = {}
    for qid, r in zip(ranks.query_ids, ranks.ranks):
        vid = grouping.get(qid)
        if vid is None:
            raise EmptyGroup(f"rank entry {qid!r} has no video grouping")
        if vid not in best:
            video_order.append(vid)
            best[vid] = int(r)
        else:
            best[vid] = min(best[vid], int(r))
    return RankVector(
        ranks=np.array([best[v] for v in video_order], dtype=np.int64),
        query_ids=tuple(video_order),
    )


def min_rank_multi_gallery(rank_vectors: Sequence[RankVector]) -> RankVector:
    """Elementwise minimum across aligned rank vectors (one per centroid gallery)."""
    if len(rank_vectors) == 0:
        raise MisalignedVectors("need at least one rank vector")
    first = rank_vectors[0]
    for rv in rank_vectors[1:]:
        if rv.query_ids != first.query_ids:
            raise MisalignedVectors("rank vectors disagree on query identifiers")
    stacked = np.stack([rv.ranks for rv in rank_vectors])
    return RankVector(ranks=stacked.min(axis=0), query_ids=first.query_ids)
