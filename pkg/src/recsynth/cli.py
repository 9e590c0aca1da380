"""Command line: ``synth`` runs one benchmark, ``bench`` runs a directory of
them under several variants and writes CSV tables."""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from pathlib import Path

from .bench import BenchError, load_benchmark
from .cgen import CgenConfig
from .driver import EXHAUSTED, SOLUTION, TIMED_OUT, InstanceError, RunStats, solve
from .enumeration import VARIANTS
from .lang import LangError
from .sketch import emergent_str
from .sexpr import ParseError

log = logging.getLogger("recsynth")

EXIT = {SOLUTION: 0, EXHAUSTED: 1, TIMED_OUT: 2}
INPUT_ERROR = 3
STATS_FIELDS = list(RunStats.__dataclass_fields__)


def _cfg_overrides(args) -> dict:
    return {
        "int_bound": args.cex_int_bound,
        "list_len": args.cex_list_len,
        "samples": args.cex_samples,
        "budget": args.budget,
    }


def _add_cfg_flags(p):
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--cex-int-bound", type=int)
    p.add_argument("--cex-list-len", type=int)
    p.add_argument("--cex-samples", type=int)
    p.add_argument("--budget", type=int, help="evaluation steps per call")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="recsynth")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("synth", help="synthesize one benchmark")
    s.add_argument("file")
    s.add_argument("--variant", choices=VARIANTS, default="proph")
    s.add_argument("--size-bound", type=int)
    s.add_argument("--timeout", type=float, help="seconds")
    s.add_argument("--stats", help="append a JSON stats line to this file ('-' for stdout)")
    s.add_argument("--print-solution", action="store_true", help="also print the emergent")
    _add_cfg_flags(s)

    b = sub.add_parser("bench", help="run a benchmark directory")
    b.add_argument("dir")
    b.add_argument("--variants", default=",".join(VARIANTS))
    b.add_argument("--timeout", type=float, default=120.0)
    b.add_argument("--csv", required=True, help="per-run stats table")
    b.add_argument("--cactus", help="cactus table (default: <csv stem>_cactus.csv)")
    b.add_argument("--seeds", default="1", help="comma-separated seeds")
    _add_cfg_flags(b)
    return ap


def run_one(path, variant, seed, overrides, timeout=None, size_bound=None):
    bf = load_benchmark(path)
    inst = bf.instance
    if size_bound is not None:
        inst.size_bound = size_bound
    cfg = bf.config(CgenConfig(seed=seed), **overrides)
    return bf, solve(inst, variant, cfg, timeout, name=bf.name)


def _synth(args) -> int:
    try:
        bf, res = run_one(args.file, args.variant, args.seed, _cfg_overrides(args),
                          args.timeout, args.size_bound)
    except (OSError, ParseError, BenchError, InstanceError, LangError) as e:
        print(f"error: {e}", file=sys.stderr)
        return INPUT_ERROR
    print(res.status)
    if res.solved:
        print(res.program_text())
        if args.print_solution:
            for em in res.candidate.emergents:
                print(";", emergent_str(em))
    if args.stats:
        line = json.dumps(res.stats.as_dict())
        if args.stats == "-":
            print(line)
        else:
            with open(args.stats, "a") as fh:
                fh.write(line + "\n")
    return EXIT[res.status]


def cactus_rows(rows, variants, budgets) -> list:
    """(variant, time budget, solved count) for each budget."""
    out = []
    for v in variants:
        times = sorted(r["seconds"] for r in rows if r["variant"] == v and r["outcome"] == SOLUTION)
        for t in budgets:
            out.append({"variant": v, "time_budget": t, "solved": sum(x <= t for x in times)})
    return out


def _bench(args) -> int:
    variants = [v.strip() for v in args.variants.split(",") if v.strip()]
    bad = [v for v in variants if v not in VARIANTS]
    if bad:
        print(f"error: unknown variant(s) {', '.join(bad)}", file=sys.stderr)
        return INPUT_ERROR
    files = sorted(Path(args.dir).glob("*.bench"))
    if not files:
        print(f"error: no .bench files in {args.dir}", file=sys.stderr)
        return INPUT_ERROR
    seeds = [int(s) for s in args.seeds.split(",")]
    rows = []
    for path in files:
        for v in variants:
            for seed in seeds:
                try:
                    _, res = run_one(path, v, seed, _cfg_overrides(args), args.timeout)
                except (ParseError, BenchError, InstanceError, LangError) as e:
                    print(f"error: {path}: {e}", file=sys.stderr)
                    return INPUT_ERROR
                row = res.stats.as_dict()
                rows.append(row)
                log.info("%s %s seed=%d %s %.2fs", row["benchmark"], v, seed,
                         row["outcome"], row["seconds"])
    with open(args.csv, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=STATS_FIELDS)
        w.writeheader()
        w.writerows(rows)
    cactus = args.cactus or str(Path(args.csv).with_name(Path(args.csv).stem + "_cactus.csv"))
    budgets = sorted({r["seconds"] for r in rows if r["outcome"] == SOLUTION} | {args.timeout})
    with open(cactus, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=["variant", "time_budget", "solved"])
        w.writeheader()
        w.writerows(cactus_rows(rows, variants, budgets))
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(message)s")
    if args.command == "synth":
        return _synth(args)
    return _bench(args)


if __name__ == "__main__":
    sys.exit(main())
