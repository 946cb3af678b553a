"""Command-line harness.

    loopforest run <file> [--mode maintain|recompute|differential]
                          [--policy reject|latch] [--dump lnf|dfst|dot]
                          [--report <path>]
    loopforest fuzz --seed S --n N --events E [--cases C] [--policy ...]
                    [--jobs J] [--no-shrink] [--report <path>]

Exit codes: 0 all checks pass, 1 mismatch or check failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import sys
from multiprocessing import Pool

from .errors import StreamSyntaxError
from .graph import Cfg
from .harness import (DIFFERENTIAL, MAINTAIN, RECOMPUTE, fuzz_case,
                      fuzz_report, render_report, run_stream)
from .maintainer import LATCH, REJECT, LoopForestMaintainer
from .stream import parse_stream


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="loopforest",
        description="replay, differentially test, and fuzz dynamic loop nesting forests")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="replay an update stream file")
    run.add_argument("file")
    run.add_argument("--mode", choices=[MAINTAIN, RECOMPUTE, DIFFERENTIAL],
                     default=MAINTAIN)
    run.add_argument("--policy", choices=[REJECT, LATCH], default=REJECT)
    run.add_argument("--dump", choices=["lnf", "dfst", "dot"])
    run.add_argument("--report", metavar="PATH")

    fuzz = sub.add_parser("fuzz", help="run randomized differential checks")
    fuzz.add_argument("--seed", type=int, default=0)
    fuzz.add_argument("--n", type=int, default=16)
    fuzz.add_argument("--events", type=int, default=100)
    fuzz.add_argument("--cases", type=int, default=1)
    fuzz.add_argument("--policy", choices=[REJECT, LATCH], default=REJECT)
    fuzz.add_argument("--jobs", type=int, default=1)
    fuzz.add_argument("--no-shrink", action="store_true")
    fuzz.add_argument("--report", metavar="PATH")
    return parser


def _cmd_run(args) -> int:
    try:
        with open(args.file, "rb") as fh:
            stream = parse_stream(fh.read())
    except OSError as exc:
        print(f"loopforest: cannot read {args.file}: {exc}", file=sys.stderr)
        return 2
    except StreamSyntaxError as exc:
        print(f"loopforest: {args.file}: {exc}", file=sys.stderr)
        return 2

    report = run_stream(stream, args.mode, args.policy)
    text = render_report(report)
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)

    if args.dump == "lnf":
        sys.stdout.write(report.final_dump)
    elif args.dump:
        maint = _replay(stream, args.policy)
        sys.stdout.write(maint.tree.dump() if args.dump == "dfst"
                         else maint.tree.to_dot(maint.g))
    return 1 if report.mismatch else 0


def _replay(stream, policy: str) -> LoopForestMaintainer:
    from .errors import IrreducibleError

    maint = LoopForestMaintainer(Cfg(stream.n, stream.root), policy)
    for ev in stream.events:
        try:
            if ev.kind == "+":
                maint.insert_edge(ev.src, ev.dst)
            else:
                maint.delete_edge(ev.src, ev.dst)
        except IrreducibleError:
            if policy == LATCH:
                break
    return maint


def _fuzz_one(params: tuple[int, int, int, str, bool]):
    seed, n, events, policy, shrink = params
    return fuzz_case(seed, n, events, policy, shrink=shrink)


def _cmd_fuzz(args) -> int:
    if args.n < 1 or args.events < 0 or args.cases < 1:
        print("loopforest: --n must be >= 1, --events >= 0, --cases >= 1",
              file=sys.stderr)
        return 2
    params = [(seed, args.n, args.events, args.policy, not args.no_shrink)
              for seed in range(args.seed, args.seed + args.cases)]
    if args.jobs > 1:
        with Pool(args.jobs) as pool:
            results = pool.map(_fuzz_one, params)
    else:
        results = [_fuzz_one(p) for p in params]
    text = fuzz_report(results)
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0 if all(r.ok for r in results) else 1


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "run":
        return _cmd_run(args)
    return _cmd_fuzz(args)


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
