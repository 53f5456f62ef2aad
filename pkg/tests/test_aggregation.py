import numpy as np
import pytest

from framerank import (
    AggregationConfig,
    FrameMatrix,
    aggregate_kmeans,
    aggregate_mean,
    aggregate_single_frame,
)
from framerank.errors import InsufficientFrames, ZeroVector

from conftest import optimal_two_partition_sse


def fm(rows, video_id="v"):
    return FrameMatrix(video_id, np.array(rows, dtype=float))


def kmeans_cfg(k, normalize=False, **kw):
    return AggregationConfig(method="kmeans", k=k, normalize_frames_first=normalize, **kw)


class TestSingleFrame:
    def test_positional_selection(self):
        matrix = fm([[1, 0], [0, 1], [1, 1]])
        rep = aggregate_single_frame(matrix, 2, normalize_frames_first=False)
        assert np.allclose(rep.vectors[0], [0, 1])

    def test_clamps_past_last_frame(self):
        matrix = fm([[i, 0] for i in range(1, 6)])
        rep = aggregate_single_frame(matrix, 30, normalize_frames_first=False)
        assert np.allclose(rep.vectors[0], [5, 0])

    def test_constant_video_matches_mean(self):
        matrix = fm([[0.3, 0.7]] * 40)
        rep = aggregate_single_frame(matrix, 30)
        mean = aggregate_mean(matrix)
        assert np.allclose(rep.vectors, mean.vectors, atol=1e-6)


class TestMean:
    def test_plain_average(self):
        rep = aggregate_mean(fm([[1, 0], [0, 1]]), normalize_frames_first=False)
        assert np.allclose(rep.vectors[0], [0.5, 0.5])

    def test_single_column_identity(self):
        rep = aggregate_mean(fm([[0.2, 0.9]]), normalize_frames_first=False)
        assert np.allclose(rep.vectors[0], [0.2, 0.9])

    def test_normalized_average(self):
        rep = aggregate_mean(fm([[2, 0], [0, 1]]), normalize_frames_first=True)
        assert np.allclose(rep.vectors[0], [0.5, 0.5])

    def test_zero_column_rejected_when_normalizing(self):
        with pytest.raises(ZeroVector):
            aggregate_mean(fm([[1, 0], [0, 0]]), normalize_frames_first=True)

    def test_permutation_invariance(self, rng):
        rows = rng.normal(size=(12, 6))
        base = aggregate_mean(FrameMatrix("v", rows)).vectors
        perm = aggregate_mean(FrameMatrix("v", rows[rng.permutation(12)])).vectors
        assert np.allclose(base, perm, atol=1e-6)


class TestKmeans:
    def test_two_well_separated_groups(self):
        matrix = fm([[0, 0.9], [0, 1.1], [5, 0], [5, 0.2]])
        rep = aggregate_kmeans(matrix, kmeans_cfg(2))
        got = {tuple(np.round(v, 6)) for v in rep.vectors}
        assert got == {(0.0, 1.0), (5.0, 0.1)}
        # brute force confirms this is the optimal 2-partition
        pts = matrix.frames
        sse = sum(
            float(((pts[i] - rep.vectors[a]) ** 2).sum())
            for i, a in [(0, _nearest(pts[0], rep.vectors)), (1, _nearest(pts[1], rep.vectors)),
                         (2, _nearest(pts[2], rep.vectors)), (3, _nearest(pts[3], rep.vectors))]
        )
        assert sse == pytest.approx(optimal_two_partition_sse(pts), abs=1e-9)

    def test_k1_equals_mean(self, rng):
        for _ in range(20):
            rows = rng.normal(size=(rng.integers(1, 15), 5))
            matrix = FrameMatrix("v", rows)
            rep = aggregate_kmeans(matrix, kmeans_cfg(1))
            assert np.allclose(rep.vectors, aggregate_mean(matrix, False).vectors, atol=1e-6)

    def test_insufficient_frames(self):
        with pytest.raises(InsufficientFrames):
            aggregate_kmeans(fm([[1, 0], [0, 1], [1, 1]]), kmeans_cfg(5))

    def test_duplicate_columns_count_once(self):
        with pytest.raises(InsufficientFrames):
            aggregate_kmeans(fm([[1, 0]] * 6 + [[0, 1]]), kmeans_cfg(3))

    def test_deterministic(self, rng):
        rows = rng.normal(size=(20, 4))
        cfg = kmeans_cfg(3)
        a = aggregate_kmeans(FrameMatrix("v", rows), cfg).vectors
        b = aggregate_kmeans(FrameMatrix("v", rows), cfg).vectors
        assert np.array_equal(a, b)

    def test_permutation_gives_same_centroid_set(self, rng):
        rows = np.concatenate([
            rng.normal(size=(6, 3)),
            rng.normal(size=(6, 3)) + 20,
        ])
        cfg = kmeans_cfg(2)
        base = aggregate_kmeans(FrameMatrix("v", rows), cfg).vectors
        perm = aggregate_kmeans(FrameMatrix("v", rows[rng.permutation(12)]), cfg).vectors
        for v in base:
            assert min(np.linalg.norm(perm - v, axis=1)) < 1e-6

    def test_centroid_order_size_then_first_member(self):
        # 3 points near origin, 1 far away: bigger cluster first
        matrix = fm([[10, 0], [0, 0.1], [0, -0.1], [0, 0]])
        rep = aggregate_kmeans(matrix, kmeans_cfg(2))
        assert np.allclose(rep.vectors[0], [0, 0], atol=1e-6)
        assert np.allclose(rep.vectors[1], [10, 0], atol=1e-6)

    def test_convex_hull_norm_bound(self, rng):
        rows = rng.normal(size=(15, 4))
        rep = aggregate_kmeans(FrameMatrix("v", rows), kmeans_cfg(4))
        max_norm = np.linalg.norm(rows, axis=1).max()
        assert all(np.linalg.norm(v) <= max_norm + 1e-6 for v in rep.vectors)


def _nearest(point, centroids):
    return int(np.linalg.norm(centroids - point, axis=1).argmin())
