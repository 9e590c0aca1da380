"""Cactus plot (benchmarks solved against time budget) from a runs table
written by ``recsynth bench``.

    python3 scripts/plot_cactus.py results/runs.csv results/cactus.png
"""

import csv
import sys

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def plot(runs_csv, out_png):
    rows = list(csv.DictReader(open(runs_csv)))
    fig, ax = plt.subplots(figsize=(5, 3.5))
    for v in sorted({r["variant"] for r in rows}):
        times = sorted(float(r["seconds"]) for r in rows
                       if r["variant"] == v and r["outcome"] == "solution")
        ax.step(times, range(1, len(times) + 1), where="post", label=v)
    ax.set_xscale("log")
    ax.set_xlabel("time budget (s)")
    ax.set_ylabel("solved")
    ax.legend()
    fig.tight_layout()
    fig.savefig(out_png, dpi=150)


if __name__ == "__main__":
    plot(sys.argv[1], sys.argv[2] if len(sys.argv) > 2 else "cactus.png")
