"""Command-line front end.

Subcommands::

    jcmap ingest-check --input FILE
    jcmap map     --input FILE --ego NAME [--year Y ...] [--out DIR] ...
    jcmap trend   --input FILE --ego A --other B [--window 3] [--share] ...
    jcmap simulate --n-steps N [--alpha A] [--new-target-prob P] [--seed S]
    jcmap fixture  [--rate R | --series] [--seed S] --out DIR

``--input @fixture`` selects the bundled synthetic dataset. Exit status: 0
success, 1 usage error, 2 data error, 3 numerical failure. Failures print a
JSON object ``{"error": code, "message": ...}`` on standard error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .errors import JcmapError
from .genmodel import CumAdvConfig, simulate_cumulative_advantage, synthesize_environment_fixture, synthesize_series_fixture
from .ingest import aggregate, load_tensor, normalize_journal_name, read_citation_csv, write_citation_csv
from .pipeline import FORMATS, RunConfig, dumps_report, file_sha256, resolve_input, run_map_pipeline, run_trend

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_NUMERIC = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _bool(text: str) -> bool:
    low = text.lower()
    if low in ("true", "1", "yes"):
        return True
    if low in ("false", "0", "no"):
        return False
    raise argparse.ArgumentTypeError(f"expected true or false, got {text!r}")


def _formats(text: str) -> tuple[str, ...]:
    items = tuple(f.strip().lower() for f in text.split(",") if f.strip())
    bad = [f for f in items if f not in FORMATS]
    if bad or not items:
        raise argparse.ArgumentTypeError(f"formats must be a subset of {','.join(FORMATS)}")
    return tuple(f for f in FORMATS if f in items)


def _factors(text: str) -> str:
    if text.lower() == "kaiser":
        return "kaiser"
    try:
        k = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError("--factors takes 'kaiser' or a positive integer") from None
    if k < 1:
        raise argparse.ArgumentTypeError("--factors must be >= 1")
    return str(k)


def _threshold(text: str) -> str:
    from fractions import Fraction

    try:
        frac = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"bad threshold {text!r}") from None
    if not 0 < frac <= 1:
        raise argparse.ArgumentTypeError("threshold must lie in (0, 1]")
    return text


def _window(text: str) -> int:
    w = int(text)
    if w < 1 or w % 2 == 0:
        raise argparse.ArgumentTypeError("window must be an odd integer >= 1")
    return w


def _name(text: str) -> str:
    try:
        return normalize_journal_name(text)
    except JcmapError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="jcmap", description="Journal-journal citation maps and trends.")
    p.add_argument("--version", action="version", version=f"jcmap {__version__}")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    ic = sub.add_parser("ingest-check", help="parse a citation CSV and print a summary")
    ic.add_argument("--input", required=True)

    mp = sub.add_parser("map", help="factor-analyze and scale an ego environment")
    mp.add_argument("--input", required=True)
    mp.add_argument("--ego", required=True, type=_name)
    mp.add_argument("--year", type=int, action="append",
                    help="year to map; repeat for several (default: latest year)")
    mp.add_argument("--direction", choices=["cited", "citing", "both"], default="citing")
    mp.add_argument("--threshold", type=_threshold, default="0.01")
    mp.add_argument("--factors", type=_factors, default="kaiser")
    mp.add_argument("--profiles", choices=["citing", "cited"], default="citing")
    mp.add_argument("--dims", type=int, choices=[1, 2], default=2)
    mp.add_argument("--seed", type=int, default=42)
    mp.add_argument("--restarts", type=int, default=8)
    mp.add_argument("--max-iter", type=int, default=500)
    mp.add_argument("--tol", type=float, default=1e-7)
    mp.add_argument("--window", type=_window, default=3, help="unused by map; echoed")
    mp.add_argument("--zero-diagonal", type=_bool, default=True)
    mp.add_argument("--out", default=".")
    mp.add_argument("--format", dest="formats", type=_formats, default=FORMATS)

    tr = sub.add_parser("trend", help="pairwise citation traffic and moving averages")
    tr.add_argument("--input", required=True)
    tr.add_argument("--ego", required=True, type=_name, help="journal A")
    tr.add_argument("--other", required=True, type=_name, help="journal B")
    tr.add_argument("--from", dest="year_from", type=int)
    tr.add_argument("--to", dest="year_to", type=int)
    tr.add_argument("--all-years", action="store_true",
                    help="zero-fill every calendar year instead of using the years present in the data")
    tr.add_argument("--window", type=_window, default=3)
    tr.add_argument("--share", action="store_true", help="divide counts by the citing journal's yearly total")
    tr.add_argument("--out", default=".")
    tr.add_argument("--format", dest="formats", type=_formats, default=FORMATS)

    sm = sub.add_parser("simulate", help="cumulative-advantage citation counts, one per line")
    sm.add_argument("--n-steps", type=int, required=True)
    sm.add_argument("--n-seed", type=int, default=1)
    sm.add_argument("--alpha", type=float, default=0.5)
    sm.add_argument("--new-target-prob", type=float, default=0.2)
    sm.add_argument("--seed", type=int, default=42)
    sm.add_argument("--out", help="directory for counts.txt (default: standard output)")

    fx = sub.add_parser("fixture", help="write a synthetic two-block citation CSV")
    fx.add_argument("--rate", type=float, default=0.05, help="inter-block citation rate")
    fx.add_argument("--series", action="store_true", help="multi-year series (rate 0.8 -> 0.05, 1980-1994)")
    fx.add_argument("--year", type=int, default=1980)
    fx.add_argument("--seed", type=int, default=42)
    fx.add_argument("--out", default=".")
    return p


def _cmd_ingest_check(args) -> int:
    records = read_citation_csv(resolve_input(args.input))
    tensor = aggregate(records)
    summary = {
        "records": len(records),
        "cells": len(tensor),
        "total": tensor.total(),
        "years": tensor.years,
        "journals": len(tensor.journals),
        "self_citation_cells": sum(1 for (_, a, b) in tensor.entries if a == b),
    }
    sys.stdout.write(dumps_report(summary))
    return EXIT_OK


def _map_config(args, year) -> RunConfig:
    return RunConfig(
        command="map", input=args.input, ego=args.ego, year=year, direction=args.direction,
        threshold=args.threshold, factors=args.factors, dims=args.dims, seed=args.seed,
        restarts=args.restarts, max_iter=args.max_iter, tol=args.tol, window=args.window,
        zero_diagonal=args.zero_diagonal, profiles=args.profiles, out=args.out, formats=args.formats,
    )


def _cmd_map(args) -> int:
    if args.restarts < 1:
        raise UsageError("--restarts must be >= 1")
    years = args.year or [None]
    path = resolve_input(args.input)
    tensor = load_tensor(path)
    digest = file_sha256(path)
    for year in years:
        out = Path(args.out) / str(year) if len(years) > 1 else Path(args.out)
        config = _map_config(args, year)
        config.out = str(out)
        report = run_map_pipeline(config, tensor=tensor, input_sha256=digest)
        for w in report.warnings:
            logging.getLogger("jcmap").warning(w)
    return EXIT_OK


def _cmd_trend(args) -> int:
    config = RunConfig(
        command="trend", input=args.input, ego=args.ego, other=args.other, year_from=args.year_from,
        year_to=args.year_to, all_years=args.all_years, window=args.window, share=args.share,
        out=args.out, formats=args.formats,
    )
    result = run_trend(config)
    for w in result.warnings:
        logging.getLogger("jcmap").warning(w)
    return EXIT_OK


def _cmd_simulate(args) -> int:
    try:
        config = CumAdvConfig(args.n_steps, args.n_seed, args.alpha, args.new_target_prob, args.seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    text = "".join(f"{c}\n" for c in simulate_cumulative_advantage(config))
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "counts.txt").write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _cmd_fixture(args) -> int:
    if args.series:
        tensor = synthesize_series_fixture(seed=args.seed)
    else:
        if not 0 <= args.rate <= 1:
            raise UsageError("--rate must lie in [0, 1]")
        tensor = synthesize_environment_fixture(2, args.rate, args.seed, year=args.year)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    write_citation_csv(tensor, out / "fixture.csv")
    return EXIT_OK


COMMANDS = {
    "ingest-check": _cmd_ingest_check,
    "map": _cmd_map,
    "trend": _cmd_trend,
    "simulate": _cmd_simulate,
    "fixture": _cmd_fixture,
}


def _fail(code: str, message: str, status: int, **extra) -> int:
    payload = {"error": code, "message": message, **extra}
    sys.stderr.write(json.dumps(payload, sort_keys=True) + "\n")
    return status


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        return _fail("usage", str(exc), EXIT_USAGE)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s", stream=sys.stderr)
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        return _fail("usage", str(exc), EXIT_USAGE)
    except JcmapError as exc:
        return _fail(exc.code, str(exc), exc.exit_status, **{k: v for k, v in exc.to_dict().items() if k not in ("error", "message")})
    except FileNotFoundError as exc:
        return _fail("io-error", str(exc), EXIT_DATA)
    except UnicodeDecodeError as exc:
        return _fail("format-error", f"input is not UTF-8: {exc}", EXIT_DATA)
    except (ArithmeticError, np.linalg.LinAlgError) as exc:
        return _fail("numerical-failure", str(exc), EXIT_NUMERIC)


if __name__ == "__main__":
    sys.exit(main())
