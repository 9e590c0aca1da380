"""Run the shipped benchmark suite under every variant and write the
per-run and cactus tables.

    python3 scripts/run_suite.py --out results --timeout 120 --seeds 1,2,3
"""

import argparse
import sys
from pathlib import Path

from recsynth.bench import builtin_dir
from recsynth.cli import main


def run():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default="results")
    ap.add_argument("--timeout", default="120")
    ap.add_argument("--seeds", default="1")
    ap.add_argument("--variants", default="nogen,retro,proph")
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return main(["-v", "bench", str(builtin_dir()), "--csv", str(out / "runs.csv"),
                 "--cactus", str(out / "cactus.csv"), "--timeout", args.timeout,
                 "--seeds", args.seeds, "--variants", args.variants])


if __name__ == "__main__":
    sys.exit(run())
