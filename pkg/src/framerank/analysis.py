"""Duration-vs-rank study and worst-ranked-pair listings."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dataset_io import CorpusManifest
from .errors import EmptyRanks, MissingDuration
from .ranking import RankVector


@dataclass(frozen=True)
class LengthRankRow:
    video_id: str
    duration_seconds: float
    rank: int


@dataclass(frozen=True)
class LengthRankSummary:
    median_rank: float
    spearman: float
    tied: bool  # correlation degenerate (a constant variable); spearman reported as 0


def _average_ranks(values: np.ndarray) -> np.ndarray:
    """Rank transform with average ranks for ties (1-based)."""
    order = np.argsort(values, kind="stable")
    ranks = np.empty(values.size, dtype=np.float64)
    i = 0
    while i < values.size:
        j = i
        while j + 1 < values.size and values[order[j + 1]] == values[order[i]]:
            j += 1
        ranks[order[i : j + 1]] = (i + j) / 2.0 + 1.0
        i = j + 1
    return ranks


def spearman_correlation(x: np.ndarray, y: np.ndarray) -> tuple[float, bool]:
    """Pearson correlation of tie-averaged rank transforms.

    Returns (rho, degenerate); a constant input makes the statistic
    undefined, reported as (0.0, True).
    """
    rx, ry = _average_ranks(np.asarray(x, float)), _average_ranks(np.asarray(y, float))
    sx, sy = rx.std(), ry.std()
    if sx == 0.0 or sy == 0.0:
        return 0.0, True
    rho = float(((rx - rx.mean()) * (ry - ry.mean())).mean() / (sx * sy))
    return rho, False


def length_rank_table(ranks: RankVector, video_ids, manifest: CorpusManifest
                      ) -> tuple[list[LengthRankRow], LengthRankSummary]:
    """One row per query pairing the target video's duration with its rank.

    video_ids gives the target video of each rank entry (repeats allowed on
    multi-caption corpora).
    """
    if len(ranks) == 0:
        raise EmptyRanks("no ranks to analyze")
    video_ids = list(video_ids)
    if len(video_ids) != len(ranks):
        raise ValueError("video_ids must align with the rank vector")
    durations = manifest.durations()
    rows = []
    for vid, r in zip(video_ids, ranks.ranks):
        if vid not in durations:
            raise MissingDuration(f"video {vid!r} has no duration in the manifest")
        rows.append(LengthRankRow(video_id=vid, duration_seconds=durations[vid], rank=int(r)))
    rho, tied = spearman_correlation(
        np.array([row.duration_seconds for row in rows]),
        np.array([row.rank for row in rows], dtype=float),
    )
    summary = LengthRankSummary(
        median_rank=float(np.median(ranks.ranks.astype(float))),
        spearman=rho,
        tied=tied,
    )
    return rows, summary


@dataclass(frozen=True)
class WorstPair:
    query_id: str
    rank: int
    video_id: str
    caption_text: str


def worst_pairs(ranks: RankVector, manifest: CorpusManifest, top_n: int) -> list[WorstPair]:
    """The top_n worst-ranked queries, rank descending, ties by id ascending.

    Query ids resolving to captions get that caption's text and owning
    video; video-id queries get their first caption's text.
    """
    if top_n < 1:
        raise ValueError("top_n must be >= 1")
    texts = manifest.caption_texts()
    owner = {cid: vid for cid, vid in manifest.caption_pairs()}
    first_caption = {e.video_id: e.captions[0][1] for e in manifest.entries}
    listed = []
    for qid, r in zip(ranks.query_ids, ranks.ranks):
        if qid in texts:
            listed.append(WorstPair(qid, int(r), owner[qid], texts[qid]))
        else:
            listed.append(WorstPair(qid, int(r), qid, first_caption.get(qid, "")))
    listed.sort(key=lambda p: (-p.rank, p.query_id))
    return listed[:top_n]
