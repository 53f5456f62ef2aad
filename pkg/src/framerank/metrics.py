"""Retrieval metrics over a rank vector: R@k, MdR, MnR, StdR."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import EmptyRanks
from .ranking import RankVector

DEFAULT_KS = (1, 5, 10)


@dataclass(frozen=True)
class MetricReport:
    recall_at: dict[int, float]  # k -> percentage in [0, 100]
    median_rank: float
    mean_rank: float
    std_rank: float
    query_count: int

    def to_dict(self) -> dict:
        return {
            "query_count": self.query_count,
            "recall_at": {str(k): self.recall_at[k] for k in sorted(self.recall_at)},
            "median_rank": self.median_rank,
            "mean_rank": self.mean_rank,
            "std_rank": self.std_rank,
        }

    def format_text(self) -> str:
        # recalls to one decimal; ranks to two — full precision lives in to_dict()
        lines = [f"queries: {self.query_count}"]
        for k in sorted(self.recall_at):
            lines.append(f"R@{k}: {self.recall_at[k]:.1f}")
        lines.append(f"MdR: {self.median_rank:g}")
        lines.append(f"MnR: {self.mean_rank:.2f}")
        lines.append(f"StdR: {self.std_rank:.2f}")
        return "\n".join(lines) + "\n"


def _values(ranks: RankVector) -> np.ndarray:
    if len(ranks) == 0:
        raise EmptyRanks("no ranks to evaluate")
    return ranks.ranks.astype(np.float64)


def recall_at_k(ranks: RankVector, k: int) -> float:
    """Percentage of queries whose ground truth ranks within the top k."""
    vals = _values(ranks)
    if k < 1:
        raise ValueError("k must be >= 1")
    return 100.0 * float(np.count_nonzero(vals <= k)) / vals.size


def median_rank(ranks: RankVector) -> float:
    """Ascending-sort median; even counts take the midpoint of the middle pair."""
    return float(np.median(_values(ranks)))


def mean_rank(ranks: RankVector) -> float:
    return float(np.mean(_values(ranks)))


def std_rank(ranks: RankVector, sample: bool = False) -> float:
    """Population (1/n) standard deviation by default; sample (1/(n-1)) on request."""
    vals = _values(ranks)
    if sample and vals.size < 2:
        raise EmptyRanks("sample standard deviation needs at least two ranks")
    return float(np.std(vals, ddof=1 if sample else 0))


def evaluate(ranks: RankVector, ks: tuple[int, ...] = DEFAULT_KS, sample_std: bool = False) -> MetricReport:
    """Full metric report; recalls kept at full precision internally."""
    vals = _values(ranks)
    return MetricReport(
        recall_at={k: recall_at_k(ranks, k) for k in ks},
        median_rank=float(np.median(vals)),
        mean_rank=float(np.mean(vals)),
        std_rank=std_rank(ranks, sample=sample_std),
        query_count=int(vals.size),
    )
