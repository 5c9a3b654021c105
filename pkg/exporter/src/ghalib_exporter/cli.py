"""Command line entry points: export and verify."""

from __future__ import annotations

import argparse
import json
import sys

from ghalib_exporter import __version__
from ghalib_exporter.errors import ExporterError
from ghalib_exporter.export import ExportJob, SLOTS, export, verify


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise SystemExit(1)


def build_parser():
    parser = _Parser(prog="ghalib-export", description=__doc__)
    parser.add_argument("--version", action="version", version=f"ghalib-export {__version__}")
    sub = parser.add_subparsers(dest="command")

    exp = sub.add_parser("export", help="embed a corpus and write a GHEM file")
    exp.add_argument("--corpus", required=True)
    exp.add_argument("--slot", required=True, choices=SLOTS)
    exp.add_argument("--out", required=True)
    exp.add_argument("--encoders", help="JSON file mapping slots to encoder names/paths")
    exp.add_argument("--encoder", help="encoder path override for this run")
    exp.add_argument("--name", help="encoder name recorded in the header (defaults to the configured name)")
    exp.add_argument("--pooling", choices=("mean", "first_token"), default="mean")
    exp.add_argument("--max-tokens", type=int, default=128)
    exp.add_argument("--batch-size", type=int, default=16)
    exp.add_argument("--format", choices=("jsonl", "csv"), default="jsonl")

    ver = sub.add_parser("verify", help="check an exported file against its corpus")
    ver.add_argument("--ghem", required=True)
    ver.add_argument("--corpus", required=True)
    ver.add_argument("--format", choices=("jsonl", "csv"), default="jsonl")
    return parser


def _resolve_encoder(args):
    name = path = ""
    if args.encoders:
        with open(args.encoders, encoding="utf-8") as fh:
            table = json.load(fh)
        entry = table.get(args.slot)
        if entry is None:
            raise ExporterError(f"encoder config has no entry for slot {args.slot}")
        if isinstance(entry, str):
            name = path = entry
        else:
            name = entry.get("name", "")
            path = entry.get("path", name)
    if args.encoder:
        path = args.encoder
        name = name or args.encoder
    if args.name:
        name = args.name
    return name, path


def cmd_export(args):
    name, path = _resolve_encoder(args)
    job = ExportJob(
        corpus=args.corpus,
        slot=args.slot,
        out=args.out,
        encoder_name=name,
        encoder_path=path,
        pooling=args.pooling,
        max_tokens=args.max_tokens,
        batch_size=args.batch_size,
        corpus_format=args.format,
    )
    stats = export(job)
    print(f"export: {stats['rows']} rows x {stats['dim']} -> {stats['out']}")
    return 0


def cmd_verify(args):
    report = verify(args.ghem, args.corpus, args.format)
    for check, ok, detail in report.checks:
        line = f"{check}: {'pass' if ok else 'FAIL'}"
        if detail and not ok:
            line += f" ({detail})"
        print(line)
    return 0 if report.ok else 1


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "export":
            return cmd_export(args)
        if args.command == "verify":
            return cmd_verify(args)
        parser.print_usage(sys.stderr)
        return 1
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 1
    except ExporterError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
