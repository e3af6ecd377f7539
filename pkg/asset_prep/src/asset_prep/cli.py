"""Command-line entry points for the exporters.

Each subcommand writes one asset file plus a manifest
(`<output>.manifest.json`) recording the source, row count and checksum.
"""

from __future__ import annotations

import argparse
import sys

from .exports import (
    export_embeddings,
    export_gazetteer,
    export_ic_table,
    export_pos_lexicon,
)
from .manifest import ExportManifest


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="asset-prep",
        description="Export raw local resources into budgetdp asset files",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("embeddings", help="word vector file -> embedding asset")
    p.add_argument("--source", required=True, help="text-format vector file")
    p.add_argument("--output", required=True)
    p.add_argument("--vocab-limit", type=int, default=10000)
    p.set_defaults(func=run_embeddings)

    p = sub.add_parser("ic-table", help="tagged corpora -> information-content TSV")
    p.add_argument(
        "--corpus",
        action="append",
        required=True,
        metavar="ID=PATH",
        help="corpus id and word/TAG file (repeatable)",
    )
    p.add_argument("--output", required=True)
    p.set_defaults(func=run_ic_table)

    p = sub.add_parser("gazetteer", help="entity list -> gazetteer asset")
    p.add_argument("--source", required=True)
    p.add_argument("--output", required=True)
    p.set_defaults(func=run_gazetteer)

    p = sub.add_parser("pos-lexicon", help="word/TAG corpus -> tag lexicon TSV")
    p.add_argument("--source", required=True)
    p.add_argument("--output", required=True)
    p.set_defaults(func=run_pos_lexicon)

    return parser


def _finish(kind, source, output, rows) -> int:
    manifest = ExportManifest()
    manifest.add(kind, source, output, rows)
    manifest.write(f"{output}.manifest.json")
    print(f"{kind}: wrote {rows} rows to {output}")
    return 0


def run_embeddings(args) -> int:
    rows = export_embeddings(args.source, args.output, args.vocab_limit)
    return _finish("embeddings", args.source, args.output, rows)


def run_ic_table(args) -> int:
    corpora = {}
    for item in args.corpus:
        corpus_id, sep, path = item.partition("=")
        if not sep or not corpus_id or not path:
            raise ValueError(f"--corpus expects ID=PATH, got {item!r}")
        corpora[corpus_id] = path
    rows = export_ic_table(corpora, args.output)
    return _finish("ic-table", ",".join(sorted(corpora)), args.output, rows)


def run_gazetteer(args) -> int:
    rows = export_gazetteer(args.source, args.output)
    return _finish("gazetteer", args.source, args.output, rows)


def run_pos_lexicon(args) -> int:
    rows = export_pos_lexicon(args.source, args.output)
    return _finish("pos-lexicon", args.source, args.output, rows)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
