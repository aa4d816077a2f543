"""Command-line front end: ``oblisat check`` and ``oblisat bench``."""

from __future__ import annotations

import argparse
import sys
import time

from oblisat.bench import family_items, file_items, run_corpus, summary_line
from oblisat.explorer import TransitionSystem
from oblisat.ltl import ParseError, tag
from oblisat.obligation import ResourceLimit
from oblisat.pipeline import MODES, CheckConfig, decide, to_formula
from oblisat.sat import Cancelled

EXIT_SAT, EXIT_UNSAT, EXIT_UNKNOWN, EXIT_ERROR = 10, 20, 30, 1
EXIT_CODES = {"sat": EXIT_SAT, "unsat": EXIT_UNSAT, "unknown": EXIT_UNKNOWN}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_ERROR)


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--mode", choices=MODES, default="auto")
    p.add_argument("--timeout", type=float, default=0.0, help="seconds per formula, 0 for none")
    p.add_argument("--state-cap", type=int, default=100_000)
    p.add_argument("--product-cap", type=int, default=100_000)
    p.add_argument("--external-sat", action="store_true", help="use the solver named by OBLI_SAT_CMD")
    p.add_argument("--no-validate", action="store_true", help="skip witness validation")
    p.add_argument("--seed", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="oblisat", description="LTL satisfiability checking with obligation acceleration.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    check = sub.add_parser("check", help="decide one formula")
    check.add_argument("formula", nargs="?", help="formula text (or use -f)")
    check.add_argument("-f", "--file", help="read the formula from a file")
    check.add_argument("--witness", action="store_true", help="print a satisfying lasso")
    check.add_argument("--stats", action="store_true", help="print run statistics")
    check.add_argument("--dot", metavar="PATH", help="write the explored transition system as Graphviz")
    _common(check)

    bench = sub.add_parser("bench", help="run a benchmark family or a corpus of files")
    bench.add_argument("files", nargs="*", help="formula files, one formula per file")
    bench.add_argument(
        "--bench",
        metavar="FAMILY:PARAMS",
        help="random:COUNT,LENGTH[,ATOMS] | patterns:COUNT,N | C:N | E:N | U:N (N may be LO-HI)",
    )
    bench.add_argument("--csv", metavar="PATH", help="write records here instead of stdout")
    _common(bench)
    return parser


def _config(args) -> CheckConfig:
    return CheckConfig(
        timeout=args.timeout,
        state_cap=args.state_cap,
        product_cap=args.product_cap,
        mode=args.mode,
        external_sat=args.external_sat,
        validate=not args.no_validate,
    )


def _write_dot(path: str, verdict, text: str, cfg: CheckConfig) -> None:
    ts = verdict.ts
    if ts is None:
        deadline = time.monotonic() + cfg.timeout if cfg.timeout > 0 else None
        ts = TransitionSystem(
            tag(to_formula(text)),
            cfg.state_cap,
            cfg.product_cap,
            lambda: deadline is not None and time.monotonic() > deadline,
        )
        try:
            ts.explore_all()
        except (Cancelled, ResourceLimit):
            pass  # write the part explored so far
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(ts.to_dot())


def _check(args) -> int:
    if (args.formula is None) == (args.file is None):
        print("oblisat: error: give exactly one of FORMULA or -f FILE", file=sys.stderr)
        return EXIT_ERROR
    if args.file is not None:
        with open(args.file, encoding="utf-8") as fh:
            text = fh.read()
    else:
        text = args.formula
    cfg = _config(args)
    verdict = decide(text, cfg)
    print(verdict.status)
    if args.witness and verdict.witness is not None:
        print(verdict.witness)
    if verdict.is_unsat and verdict.evidence is not None:
        ev = verdict.evidence
        print(f"reason: {ev.describe() if hasattr(ev, 'describe') else ev}")
    if verdict.status == "unknown":
        print(f"reason: {verdict.method}")
    if args.stats:
        print(f"method: {verdict.method}")
        print(f"stats: {verdict.stats.summary()}")
    if args.dot:
        _write_dot(args.dot, verdict, text, cfg)
    return EXIT_CODES[verdict.status]


def _bench(args) -> int:
    items = []
    if args.bench:
        items.extend(family_items(args.bench, args.seed))
    items.extend(file_items(args.files))
    if not items:
        print("oblisat: error: nothing to run; give --bench or files", file=sys.stderr)
        return EXIT_ERROR
    cfg = _config(args)
    if args.csv:
        with open(args.csv, "w", encoding="utf-8", newline="") as out:
            _, totals = run_corpus(items, cfg, out)
    else:
        _, totals = run_corpus(items, cfg, sys.stdout)
    print(summary_line(totals), file=sys.stderr if not args.csv else sys.stdout)
    return 0


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:  # bad flags or --help
        return e.code if isinstance(e.code, int) else EXIT_ERROR
    try:
        if args.command == "check":
            return _check(args)
        return _bench(args)
    except ParseError as e:
        print(f"oblisat: parse error: {e}", file=sys.stderr)
    except (OSError, ValueError) as e:
        print(f"oblisat: error: {e}", file=sys.stderr)
    return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
