"""Command line: ``lietransport {list,check,report}``."""

from __future__ import annotations

import argparse
import dataclasses
import sys

from .errors import ConfigError
from .harness import list_catalog, load_config, run_suite, write_reports


def _common(p):
    p.add_argument("--config", required=True, metavar="PATH", help="TOML run configuration")
    p.add_argument("--seed", type=int, help="override sampling seed")
    p.add_argument("--tolerance-scale", type=float, default=None, metavar="F", help="multiply every tolerance by F")
    p.add_argument("--format", choices=("csv", "json"), default=None, help="report file format")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lietransport", description="Numerical checks of Lie-derivative transport laws.")
    parser.add_argument("--list", action="store_true", help="print the catalog and exit")
    sub = parser.add_subparsers(dest="command")

    p_list = sub.add_parser("list", help="list flows, field suites and checks")
    p_list.add_argument("--json", action="store_true", help="machine-readable JSON array")
    p_list.add_argument("--filter", default="", help="substring filter")

    p_check = sub.add_parser("check", help="run checks and print pass/fail")
    _common(p_check)
    p_check.add_argument("--out", metavar="DIR", help="also write report files here")

    p_rep = sub.add_parser("report", help="run checks and write report files")
    _common(p_rep)
    p_rep.add_argument("--out", metavar="DIR", help="output directory (defaults to [output].dir)")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.list or args.command == "list":
        print(list_catalog(machine=getattr(args, "json", False), filter_text=getattr(args, "filter", "")))
        return 0
    if args.command is None:
        build_parser().print_help()
        return 2
    try:
        config = load_config(args.config)
        if args.seed is not None:
            config = dataclasses.replace(config, seed=args.seed)
        if args.tolerance_scale is not None:
            config = dataclasses.replace(config, tolerance_scale=args.tolerance_scale)
        reports = run_suite(config)
    except (ConfigError, OSError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    for r in reports:
        print(r.summary())
    out_dir = args.out or (config.out_dir if args.command == "report" else None)
    if args.command == "report" and out_dir is None:
        print("configuration error: report needs --out or [output].dir", file=sys.stderr)
        return 2
    if out_dir is not None:
        formats = (args.format,) if args.format else config.formats
        for fmt in formats:
            write_reports(reports, out_dir, fmt, config)
    failed = sum(not r.passed for r in reports)
    print(f"{len(reports) - failed}/{len(reports)} checks passed")
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
