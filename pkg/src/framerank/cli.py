"""Command-line entry points: aggregate, evaluate, analyze.

Exit codes: 0 success, 2 input/format error, 3 protocol/integrity error.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

from . import errors
from .aggregation import AggregationConfig
from .analysis import length_rank_table, worst_pairs
from .dataset_io import (
    load_manifest,
    read_embedding_archive,
    read_id_list,
    select_split,
    write_embedding_archive,
)
from .pipeline import aggregate_archive, evaluate_run
from .ranking import RankVector

_INPUT_ERRORS = (
    errors.FormatError,
    errors.TruncatedFile,
    errors.DuplicateId,
    errors.ParseError,
    errors.MalformedFrameId,
    errors.UnknownSplit,
    errors.EmptySplit,
    errors.DimensionMismatch,
    errors.EmptyInput,
    errors.EmptyMatrix,
    errors.ZeroVector,
    errors.InsufficientFrames,
    FileNotFoundError,
    ValueError,
)
_PROTOCOL_ERRORS = (
    errors.IntegrityError,
    errors.MissingGroundTruth,
    errors.MissingDuration,
    errors.MisalignedVectors,
    errors.EmptyGroup,
    errors.EmptyRanks,
)

_AGG_NAMES = {"single": "single_frame", "mean": "mean", "kmeans": "kmeans"}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="framerank",
                                     description="Frame-embedding video retrieval engine")
    sub = parser.add_subparsers(dest="command", required=True)

    agg = sub.add_parser("aggregate", help="turn a frame archive into video representations")
    agg.add_argument("--frames", required=True, help="input .frem frame archive")
    agg.add_argument("--agg", choices=sorted(_AGG_NAMES), default="mean")
    agg.add_argument("--frame-index", type=int, default=30)
    agg.add_argument("--k", type=int, default=2)
    agg.add_argument("--normalize-frames", choices=["on", "off"], default="on")
    agg.add_argument("--out", required=True, help="output directory")

    ev = sub.add_parser("evaluate", help="rank queries and report retrieval metrics")
    ev.add_argument("--task", choices=["tvr", "vtr"], required=True)
    ev.add_argument("--videos", required=True, help="aggregated .frem video archive")
    ev.add_argument("--texts", required=True, help=".frem text archive")
    ev.add_argument("--manifest", required=True, help=".jsonl corpus manifest")
    ev.add_argument("--split", default=None)
    ev.add_argument("--split-ids", default=None, help="id list file restricting the split")
    ev.add_argument("--out", required=True, help="output directory")
    ev.add_argument("--report", choices=["text", "json"], default="text")

    an = sub.add_parser("analyze", help="length-vs-rank table and worst pairs")
    an.add_argument("--ranks", required=True, help="ranks.csv from a prior evaluate run")
    an.add_argument("--manifest", required=True)
    an.add_argument("--split", default=None)
    an.add_argument("--split-ids", default=None)
    an.add_argument("--top-n", type=int, default=10)
    an.add_argument("--out", required=True, help="output directory")
    return parser


def _load_split(args):
    manifest = load_manifest(args.manifest)
    id_list = read_id_list(args.split_ids) if args.split_ids else None
    if args.split:
        manifest = select_split(manifest, args.split, id_list=id_list)
    elif id_list is not None:
        wanted = set(id_list)
        entries = tuple(e for e in manifest.entries if e.video_id in wanted)
        if not entries:
            raise errors.EmptySplit("id list matched no manifest videos")
        manifest = type(manifest)(name=manifest.name, entries=entries)
    return manifest


def cmd_aggregate(args) -> int:
    frames = read_embedding_archive(args.frames)
    cfg = AggregationConfig(
        method=_AGG_NAMES[args.agg],
        frame_index=args.frame_index,
        k=args.k,
        normalize_frames_first=args.normalize_frames == "on",
    )
    videos = aggregate_archive(frames, cfg)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    out_path = out_dir / "videos.frem"
    write_embedding_archive(videos, out_path)
    print(f"wrote {len(videos.ids)} video vectors to {out_path}")
    return 0


def cmd_evaluate(args) -> int:
    videos = read_embedding_archive(args.videos)
    texts = read_embedding_archive(args.texts)
    manifest = _load_split(args)
    result = evaluate_run(args.task, videos, texts, manifest)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)

    ranks_path = out_dir / "ranks.csv"
    with open(ranks_path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["query_id", "target_id", "rank"])
        for query_id, target_id, rank in result.dump:
            writer.writerow([query_id, target_id, rank])

    if args.report == "json":
        report_path = out_dir / "report.json"
        report_path.write_text(
            json.dumps(result.report.to_dict(), indent=2, sort_keys=True) + "\n"
        )
    else:
        report_path = out_dir / "report.txt"
        report_path.write_text(result.report.format_text())
    sys.stdout.write(result.report.format_text())
    print(f"wrote {report_path} and {ranks_path}")
    return 0


def _read_rank_dump(path) -> list[tuple[str, str, int]]:
    rows = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != ["query_id", "target_id", "rank"]:
            raise errors.FormatError(f"{path}: not a ranks.csv dump (header {header})")
        for row in reader:
            rows.append((row[0], row[1], int(row[2])))
    return rows


def cmd_analyze(args) -> int:
    dump = _read_rank_dump(args.ranks)
    manifest = _load_split(args)
    durations = manifest.durations()
    ranks = RankVector(
        ranks=[r for _, _, r in dump],
        query_ids=tuple(q for q, _, _ in dump),
    )
    # the video side of each pair: target for TVR dumps, query for VTR dumps
    video_ids = []
    for query_id, target_id, _ in dump:
        if target_id in durations:
            video_ids.append(target_id)
        else:
            video_ids.append(query_id)
    rows, summary = length_rank_table(ranks, video_ids, manifest)
    worst = worst_pairs(ranks, manifest, args.top_n)

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    table_path = out_dir / "length_rank.csv"
    with open(table_path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["video_id", "duration_seconds", "rank"])
        for row in rows:
            writer.writerow([row.video_id, f"{row.duration_seconds:g}", row.rank])

    summary_path = out_dir / "summary.txt"
    summary_path.write_text(
        f"queries: {len(rows)}\n"
        f"median_rank: {summary.median_rank:g}\n"
        f"spearman_duration_rank: {summary.spearman:.6f}\n"
        f"spearman_degenerate_ties: {str(summary.tied).lower()}\n"
    )

    worst_path = out_dir / "worst_pairs.txt"
    with open(worst_path, "w") as fh:
        for pair in worst:
            fh.write(f"rank {pair.rank}\t{pair.query_id}\t{pair.video_id}\t{pair.caption_text}\n")
    print(f"wrote {table_path}, {summary_path}, {worst_path}")
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handler = {"aggregate": cmd_aggregate, "evaluate": cmd_evaluate, "analyze": cmd_analyze}
    try:
        return handler[args.command](args)
    except _PROTOCOL_ERRORS as e:
        print(f"error: {e}", file=sys.stderr)
        return 3
    except _INPUT_ERRORS as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
