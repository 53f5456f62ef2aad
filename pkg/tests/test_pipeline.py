import numpy as np
import pytest

from framerank import EmbeddingArchive
from framerank.dataset_io import CorpusManifest, VideoEntry
from framerank.errors import FormatError, IntegrityError
from framerank.pipeline import (
    aggregate_archive,
    evaluate_run,
    split_centroid_id,
    video_galleries,
)
from framerank.aggregation import AggregationConfig

from conftest import brute_cosine, brute_rank


def make_manifest(captions):
    """captions: dict video_id -> list of caption ids."""
    entries = [
        VideoEntry(vid, tuple((cid, f"text of {cid}") for cid in cids), 10.0, "test")
        for vid, cids in captions.items()
    ]
    return CorpusManifest("toy", tuple(entries))


def archives_for(rng, captions, d=8):
    video_ids = list(captions)
    videos = rng.normal(size=(len(video_ids), d))
    caption_ids = [cid for cids in captions.values() for cid in cids]
    texts = rng.normal(size=(len(caption_ids), d))
    return (
        EmbeddingArchive(tuple(video_ids), videos.astype(np.float32), "video"),
        EmbeddingArchive(tuple(caption_ids), texts.astype(np.float32), "text"),
    )


def test_split_centroid_id():
    assert split_centroid_id("vid@3") == ("vid", 3)
    assert split_centroid_id("plain") == ("plain", None)
    assert split_centroid_id("odd@name@2") == ("odd@name", 2)


def test_video_galleries_plain_vs_centroid(rng):
    plain = EmbeddingArchive(("a", "b"), rng.normal(size=(2, 4)).astype(np.float32), "video")
    assert len(video_galleries(plain, ["a", "b"])) == 1
    cent = EmbeddingArchive(
        ("a@0", "a@1", "b@0", "b@1"),
        rng.normal(size=(4, 4)).astype(np.float32), "video",
    )
    galleries = video_galleries(cent, ["a", "b"])
    assert len(galleries) == 2
    assert galleries[0].shape == (2, 4)


def test_video_galleries_ragged_counts_rejected(rng):
    cent = EmbeddingArchive(
        ("a@0", "a@1", "b@0"), rng.normal(size=(3, 4)).astype(np.float32), "video"
    )
    with pytest.raises(FormatError):
        video_galleries(cent, ["a", "b"])


def test_video_galleries_missing_video(rng):
    plain = EmbeddingArchive(("a",), rng.normal(size=(1, 4)).astype(np.float32), "video")
    with pytest.raises(IntegrityError):
        video_galleries(plain, ["a", "b"])


def test_tvr_matches_full_brute_force(rng):
    captions = {f"v{i}": [f"v{i}c{j}" for j in range(1 + i % 3)] for i in range(9)}
    videos, texts = archives_for(rng, captions)
    manifest = make_manifest(captions)
    result = evaluate_run("tvr", videos, texts, manifest)

    video_vecs = {vid: videos.matrix[i].astype(float) for i, vid in enumerate(videos.ids)}
    text_vecs = {cid: texts.matrix[i].astype(float) for i, cid in enumerate(texts.ids)}
    video_order = list(captions)
    expected = {}
    for vid, cids in captions.items():
        for cid in cids:
            scores = [brute_cosine(text_vecs[cid], video_vecs[v]) for v in video_order]
            expected[cid] = brute_rank(scores, video_order.index(vid))
    assert {q: int(r) for q, r in zip(result.ranks.query_ids, result.ranks.ranks)} == expected


def test_vtr_collapses_to_min_caption_rank(rng):
    captions = {f"v{i}": [f"v{i}c{j}" for j in range(3)] for i in range(7)}
    videos, texts = archives_for(rng, captions)
    manifest = make_manifest(captions)
    result = evaluate_run("vtr", videos, texts, manifest)

    video_vecs = {vid: videos.matrix[i].astype(float) for i, vid in enumerate(videos.ids)}
    text_vecs = {cid: texts.matrix[i].astype(float) for i, cid in enumerate(texts.ids)}
    caption_order = [cid for cids in captions.values() for cid in cids]
    expected = {}
    for vid, cids in captions.items():
        scores = [brute_cosine(video_vecs[vid], text_vecs[c]) for c in caption_order]
        expected[vid] = min(brute_rank(scores, caption_order.index(c)) for c in cids)
    assert {q: int(r) for q, r in zip(result.ranks.query_ids, result.ranks.ranks)} == expected
    # dump points at the caption achieving the minimum
    for vid, cid, r in result.dump:
        assert cid in captions[vid]
        assert expected[vid] == r


def test_multi_gallery_never_worse_than_single(rng):
    captions = {f"v{i}": [f"v{i}c0"] for i in range(8)}
    manifest = make_manifest(captions)
    _, texts = archives_for(rng, captions, d=5)
    k = 3
    cent_ids, cent_rows = [], []
    base_rows = []
    for i, vid in enumerate(captions):
        vecs = rng.normal(size=(k, 5))
        base_rows.append(vecs[0])
        for g in range(k):
            cent_ids.append(f"{vid}@{g}")
            cent_rows.append(vecs[g])
    single = EmbeddingArchive(tuple(captions), np.array(base_rows, np.float32), "video")
    multi = EmbeddingArchive(tuple(cent_ids), np.array(cent_rows, np.float32), "video")
    ranks_single = evaluate_run("tvr", single, texts, manifest).ranks
    ranks_multi = evaluate_run("tvr", multi, texts, manifest).ranks
    assert np.all(ranks_multi.ranks <= ranks_single.ranks)


def test_aggregate_archive_round_trip(rng):
    frame_ids, rows = [], []
    for i in range(3):
        for j in range(1, 7):
            frame_ids.append(f"v{i}#{j}")
            rows.append(rng.normal(size=4))
    frames = EmbeddingArchive(tuple(frame_ids), np.array(rows, np.float32), "frame")
    videos = aggregate_archive(frames, AggregationConfig(method="mean"))
    assert videos.ids == ("v0", "v1", "v2")
    kme = aggregate_archive(frames, AggregationConfig(method="kmeans", k=2))
    assert kme.ids == ("v0@0", "v0@1", "v1@0", "v1@1", "v2@0", "v2@1")
