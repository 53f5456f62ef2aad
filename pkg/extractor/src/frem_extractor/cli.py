"""`frem-extract`: videos + manifest in, .frem archives + sidecars out."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .encoder import DEFAULT_MODEL, make_encoder
from .errors import ExtractorError
from .frames import parse_policy
from .pipeline import (
    ExtractionConfig,
    encode_frames,
    encode_texts,
    extract_video_dir,
    load_manifest_records,
    write_with_sidecar,
)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="frem-extract",
                                     description="Encode videos and captions into .frem archives")
    parser.add_argument("--videos", required=True, help="directory of video files named <video_id>.<ext>")
    parser.add_argument("--manifest", required=True, help=".jsonl corpus manifest")
    parser.add_argument("--policy", default="all", help="all | fps:N | uniform:N")
    parser.add_argument("--out", required=True, help="output frame archive (.frem)")
    parser.add_argument("--texts-out", default=None, help="optional output text archive (.frem)")
    parser.add_argument("--model", default=DEFAULT_MODEL)
    parser.add_argument("--encoder", choices=["clip", "hash"], default="clip",
                        help="'hash' is a deterministic offline stand-in for smoke tests")
    parser.add_argument("--batch-size", type=int, default=32)
    parser.add_argument("--device", default="cpu")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = ExtractionConfig(
            model_id=args.model,
            policy=parse_policy(args.policy),
            batch_size=args.batch_size,
            device=args.device,
        )
        encoder = make_encoder(args.encoder, model_id=args.model, device=args.device)
        records = load_manifest_records(args.manifest)
        video_ids = [r["video_id"] for r in records]

        ids, matrix = encode_frames(
            extract_video_dir(args.videos, video_ids, cfg), encoder, cfg
        )
        Path(args.out).parent.mkdir(parents=True, exist_ok=True)
        write_with_sidecar(ids, matrix, "frame", args.out, cfg, encoder.model_id)
        print(f"wrote {len(ids)} frame vectors to {args.out}")

        if args.texts_out:
            captions = [(c["caption_id"], c["text"]) for r in records for c in r["captions"]]
            tids, tmatrix = encode_texts(captions, encoder, cfg)
            write_with_sidecar(tids, tmatrix, "text", args.texts_out, cfg, encoder.model_id)
            print(f"wrote {len(tids)} text vectors to {args.texts_out}")
        return 0
    except (ExtractorError, FileNotFoundError, KeyError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
