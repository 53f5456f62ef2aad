"""Shared fixtures and independent brute-force oracles.

The oracles here deliberately avoid the engine's vectorized paths: plain
loops, plain sorts, plain formulas. Tests compare the engine against them.
"""

import math

import numpy as np
import pytest


def brute_cosine(a, b):
    dot = sum(float(x) * float(y) for x, y in zip(a, b))
    na = math.sqrt(sum(float(x) ** 2 for x in a))
    nb = math.sqrt(sum(float(y) ** 2 for y in b))
    return dot / (na * nb)


def brute_rank(scores, target_index):
    """Sort descending with stable index tiebreak, find the target's position."""
    order = sorted(range(len(scores)), key=lambda j: (-scores[j], j))
    return order.index(target_index) + 1


def brute_sse(points, assignment, centroids):
    return sum(
        sum((p - c) ** 2 for p, c in zip(points[i], centroids[assignment[i]]))
        for i in range(len(points))
    )


def optimal_two_partition_sse(points):
    """Exhaustive best 2-cluster SSE over all non-trivial assignments."""
    points = [list(map(float, p)) for p in points]
    s = len(points)
    best = math.inf
    for mask in range(1, 2**s - 1):
        groups = ([], [])
        for i in range(s):
            groups[(mask >> i) & 1].append(points[i])
        sse = 0.0
        for g in groups:
            centroid = [sum(col) / len(g) for col in zip(*g)]
            sse += sum(sum((x - c) ** 2 for x, c in zip(p, centroid)) for p in g)
        best = min(best, sse)
    return best


def random_corpus(rng, n_videos=None, dim=None, max_captions=5):
    """Synthetic (video_vectors, caption records) with non-uniform captions."""
    n = n_videos or rng.integers(2, 51)
    d = dim or rng.integers(2, 17)
    videos = rng.normal(size=(n, d))
    captions = []  # (caption_id, video_index, vector)
    for i in range(n):
        for j in range(rng.integers(1, max_captions + 1)):
            captions.append((f"v{i}c{j}", i, rng.normal(size=d)))
    return videos, captions


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
