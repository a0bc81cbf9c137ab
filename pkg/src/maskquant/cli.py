"""Command-line front end: ``maskquant <subcommand> --config FILE [--out DIR] [--verify]``.

Exit codes: 0 success, 2 invalid config, 3 numerical failure (a
``*.diagnostic.json`` file is written next to the intended output).
"""

import argparse
import json
import os
import sys
import traceback

from . import __version__
from .config import ConfigError, load_config
from .csvio import verify_csv, write_csv
from .errors import MaskQuantError, NonConvergence
from .scenarios import SCENARIOS

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3


def build_parser():
    parser = argparse.ArgumentParser(prog="maskquant", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"maskquant {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in SCENARIOS:
        p = sub.add_parser(name, help=f"write the {name} table(s)")
        p.add_argument("--config", required=True, help="scenario JSON file")
        p.add_argument("--out", default=".", help="output directory (default: current)")
        p.add_argument("--verify", action="store_true", help="re-read each CSV and check its checksum")
    return parser


def _target(args, cfg):
    name = cfg.output or f"{args.command}.csv"
    return os.path.join(args.out, name)


def _write_diagnostic(path, command, exc):
    info = {"command": command, "error": type(exc).__name__, "message": str(exc)}
    if isinstance(exc, NonConvergence):
        info["error_estimate"] = None if exc.error is None else float(exc.error)
        info["estimate"] = repr(exc.estimate)
    info["traceback"] = traceback.format_exception(type(exc), exc, exc.__traceback__)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(info, fh, indent=2)


def run(command, config, out=".", verify=False):
    """Programmatic entry; returns the process exit code."""
    return main([command, "--config", config, "--out", out] + (["--verify"] if verify else []))


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
    except ConfigError as exc:
        print(f"maskquant: invalid config: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    os.makedirs(args.out, exist_ok=True)
    target = _target(args, cfg)
    stem, ext = os.path.splitext(target)
    try:
        tables = SCENARIOS[args.command](cfg)
    except ConfigError as exc:
        print(f"maskquant: invalid config: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (MaskQuantError, ArithmeticError, ValueError) as exc:
        diag = stem + ".diagnostic.json"
        _write_diagnostic(diag, args.command, exc)
        print(f"maskquant: numerical failure ({type(exc).__name__}): {exc}; see {diag}", file=sys.stderr)
        return EXIT_NUMERIC

    resolved = cfg.resolved()
    for table in tables:
        path = stem + table.suffix + (ext or ".csv")
        title = f"maskquant {__version__} {args.command}"
        if table.notes:
            title += "\n# " + "\n# ".join(table.notes)
        write_csv(path, table.columns, table.rows, config=resolved, title=title)
        if args.verify and not verify_csv(path):
            print(f"maskquant: checksum mismatch in {path}", file=sys.stderr)
            return EXIT_NUMERIC
        print(path)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
