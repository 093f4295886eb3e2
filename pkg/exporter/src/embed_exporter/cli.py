"""Standalone command: embed-export --input docs.jsonl --model <id> --out v.jsonl."""

import argparse
import json
import sys

from .export import ExportError, ExportJob, export


def build_parser():
    parser = argparse.ArgumentParser(
        prog="embed-export",
        description=(
            "Encode documents sentence-by-sentence with a pretrained "
            "transformer and write vectors.jsonl."
        ),
    )
    parser.add_argument("--input", required=True, help="docs.jsonl or examples.jsonl")
    parser.add_argument(
        "--model",
        required=True,
        help="encoder identifier: a hub name or a local directory",
    )
    parser.add_argument("--out", required=True, help="vectors.jsonl output path")
    parser.add_argument("--batch-size", type=int, default=32)
    parser.add_argument("--device", default="cpu", help="cpu or a CUDA device")
    parser.add_argument(
        "--pooling",
        default="token-mean",
        choices=["token-mean"],
        help="sentence pooling strategy",
    )
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        job = ExportJob(
            input_path=args.input,
            model_id=args.model,
            output_path=args.out,
            batch_size=args.batch_size,
            device=args.device,
            pooling=args.pooling,
        )
        summary = export(job)
    except ExportError as exc:
        print(f"embed-export: {exc}", file=sys.stderr)
        return 1
    summary = dict(summary)
    summary.pop("sentence_counts")
    print(json.dumps(summary))
    return 0


if __name__ == "__main__":
    sys.exit(main())
