"""Orchestration: archives + manifest in, rank vectors and reports out.

This is the glue the CLI drives. It applies the protocol rules
automatically: minimum rank over a video's captions for video-to-text
runs on multi-caption corpora, and minimum rank across centroid
galleries when the video archive carries 'videoId@centroidIndex' ids.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .aggregation import AggregationConfig, aggregate
from .core import similarity_matrix
from .dataset_io import (
    CorpusManifest,
    EmbeddingArchive,
    check_referential_integrity,
    group_frames_by_video,
)
from .errors import FormatError, IntegrityError
from .metrics import MetricReport, evaluate
from .ranking import (
    GroundTruth,
    RankVector,
    collapse_min_rank_by_video,
    min_rank_multi_gallery,
    rank_of_target,
    rank_queries,
)

TASKS = ("tvr", "vtr")


def aggregate_archive(frames: EmbeddingArchive, cfg: AggregationConfig) -> EmbeddingArchive:
    """Aggregate every video in a frame archive into a role-'video' archive.

    k-means representations get ids 'videoId@0'..'videoId@k-1'; single-vector
    methods keep the plain video id.
    """
    ids: list[str] = []
    rows: list[np.ndarray] = []
    for matrix in group_frames_by_video(frames):
        rep = aggregate(matrix, cfg)
        if cfg.method == "kmeans":
            for i, vec in enumerate(rep.vectors):
                ids.append(f"{matrix.video_id}@{i}")
                rows.append(vec)
        else:
            ids.append(matrix.video_id)
            rows.append(rep.vectors[0])
    return EmbeddingArchive(ids=tuple(ids), matrix=np.stack(rows), role="video")


def split_centroid_id(archive_id: str) -> tuple[str, int | None]:
    """'videoId@3' -> ('videoId', 3); plain ids get centroid None."""
    head, sep, tail = archive_id.rpartition("@")
    if sep and head and tail.isdigit():
        return head, int(tail)
    return archive_id, None


def video_galleries(archive: EmbeddingArchive, video_order: list[str]) -> list[np.ndarray]:
    """One (n_videos, d) gallery per centroid index, aligned with video_order.

    A plain archive yields a single gallery. Mixed or ragged centroid
    counts are rejected.
    """
    if archive.role != "video":
        raise FormatError(f"expected a video archive, got role {archive.role!r}")
    per_video: dict[str, dict[int, np.ndarray]] = {}
    plain: dict[str, np.ndarray] = {}
    for archive_id, row in zip(archive.ids, archive.matrix):
        vid, centroid = split_centroid_id(archive_id)
        if centroid is None:
            plain[vid] = row
        else:
            per_video.setdefault(vid, {})[centroid] = row
    if plain and per_video:
        raise FormatError("video archive mixes plain and centroid-suffixed ids")
    if plain:
        missing = [v for v in video_order if v not in plain]
        if missing:
            raise IntegrityError(f"video archive lacks {missing[:5]}")
        return [np.stack([plain[v] for v in video_order]).astype(np.float64)]
    counts = {len(c) for v, c in per_video.items()}
    if len(counts) != 1:
        raise FormatError(f"videos carry differing centroid counts {sorted(counts)}")
    k = counts.pop()
    galleries = []
    for g in range(k):
        rows = []
        for v in video_order:
            if v not in per_video or g not in per_video[v]:
                raise IntegrityError(f"video {v!r} lacks centroid {g}")
            rows.append(per_video[v][g])
        galleries.append(np.stack(rows).astype(np.float64))
    return galleries


@dataclass(frozen=True)
class EvaluationResult:
    report: MetricReport
    ranks: RankVector
    # per-query dump rows: (query_id, target_id, rank)
    dump: tuple[tuple[str, str, int], ...]


def evaluate_run(task: str, videos: EmbeddingArchive, texts: EmbeddingArchive,
                 manifest: CorpusManifest, ks: tuple[int, ...] = (1, 5, 10)) -> EvaluationResult:
    if task not in TASKS:
        raise ValueError(f"unknown task {task!r}")
    if texts.role != "text":
        raise FormatError(f"expected a text archive, got role {texts.role!r}")
    video_order = manifest.video_ids()
    caption_pairs = manifest.caption_pairs()  # (caption_id, video_id)
    caption_ids = [cid for cid, _ in caption_pairs]

    galleries = video_galleries(videos, video_order)
    missing = check_referential_integrity(manifest, video_order, texts.ids)
    if missing:
        raise IntegrityError("; ".join(missing[:10]))
    text_index = {tid: i for i, tid in enumerate(texts.ids)}
    caption_vecs = texts.matrix[[text_index[cid] for cid in caption_ids]].astype(np.float64)

    if task == "tvr":
        return _evaluate_tvr(galleries, caption_vecs, caption_pairs, video_order, ks)
    return _evaluate_vtr(galleries, caption_vecs, caption_pairs, video_order, ks)


def _evaluate_tvr(galleries, caption_vecs, caption_pairs, video_order, ks) -> EvaluationResult:
    caption_ids = [cid for cid, _ in caption_pairs]
    gt = GroundTruth(targets=dict(caption_pairs))
    per_gallery = []
    for gallery in galleries:
        sim = similarity_matrix(caption_vecs, gallery,
                                query_ids=caption_ids, gallery_ids=video_order)
        per_gallery.append(rank_queries(sim, gt))
    ranks = min_rank_multi_gallery(per_gallery)
    dump = tuple(
        (cid, vid, int(r))
        for (cid, vid), r in zip(caption_pairs, ranks.ranks)
    )
    return EvaluationResult(report=evaluate(ranks, ks=ks), ranks=ranks, dump=dump)


def _evaluate_vtr(galleries, caption_vecs, caption_pairs, video_order, ks) -> EvaluationResult:
    caption_ids = [cid for cid, _ in caption_pairs]
    grouping = dict(caption_pairs)
    video_row = {vid: i for i, vid in enumerate(video_order)}
    collapsed_per_gallery = []
    # best (rank, gallery index, caption position) per video, for the dump
    best: dict[str, tuple[int, int, int]] = {}
    for g, gallery in enumerate(galleries):
        sim = similarity_matrix(gallery, caption_vecs,
                                query_ids=video_order, gallery_ids=caption_ids)
        pair_ranks = np.empty(len(caption_pairs), dtype=np.int64)
        for j, (cid, vid) in enumerate(caption_pairs):
            r = rank_of_target(sim.scores[video_row[vid]], j)
            pair_ranks[j] = r
            key = (r, g, j)
            if vid not in best or key < best[vid]:
                best[vid] = key
        collapsed_per_gallery.append(
            collapse_min_rank_by_video(RankVector(pair_ranks, tuple(caption_ids)), grouping)
        )
    ranks = min_rank_multi_gallery(collapsed_per_gallery)
    dump = tuple(
        (vid, caption_pairs[best[vid][2]][0], int(r))
        for vid, r in zip(ranks.query_ids, ranks.ranks)
    )
    return EvaluationResult(report=evaluate(ranks, ks=ks), ranks=ranks, dump=dump)
