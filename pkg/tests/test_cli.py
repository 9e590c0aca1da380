import csv
import json
import shutil

from recsynth.bench import builtin_benchmarks
from recsynth.cli import cactus_rows, main

from test_bench import MINI


def write(tmp_path, name, text):
    p = tmp_path / f"{name}.bench"
    p.write_text(text)
    return p


def test_synth_prints_solution_and_stats(tmp_path, capsys):
    p = write(tmp_path, "mini", MINI)
    stats = tmp_path / "stats.jsonl"
    code = main(["synth", str(p), "--stats", str(stats), "--print-solution"])
    out = capsys.readouterr().out.splitlines()
    assert code == 0
    assert out[0] == "solution"
    assert out[1].startswith("(definec f")
    row = json.loads(stats.read_text())
    assert row["benchmark"] == "mini" and row["outcome"] == "solution" and row["seed"] == 1


def test_synth_exit_codes(tmp_path, capsys):
    bad = write(tmp_path, "bad", MINI.replace("(?b L)", "(?b Q)"))
    assert main(["synth", str(bad)]) == 3
    assert "error:" in capsys.readouterr().err
    unsat = write(tmp_path, "unsat", MINI.replace("(= (head (f x xs)) x)", "false"))
    assert main(["synth", str(unsat)]) == 1
    assert main(["synth", str(write(tmp_path, "m", MINI)), "--timeout", "0"]) == 2


def test_bench_writes_tables(tmp_path):
    d = tmp_path / "suite"
    d.mkdir()
    write(d, "mini", MINI)
    shutil.copy(next(p for p in builtin_benchmarks() if p.stem == "count"), d)
    out = tmp_path / "runs.csv"
    assert main(["bench", str(d), "--csv", str(out), "--timeout", "60", "--seeds", "1,2"]) == 0
    rows = list(csv.DictReader(out.open()))
    assert len(rows) == 2 * 3 * 2
    assert {r["outcome"] for r in rows} == {"solution"}
    cactus = list(csv.DictReader((tmp_path / "runs_cactus.csv").open()))
    last = [r for r in cactus if r["time_budget"] == "60.0"]
    assert {r["variant"]: int(r["solved"]) for r in last} == {"nogen": 4, "retro": 4, "proph": 4}


def test_bench_rejects_unknown_variant(tmp_path):
    assert main(["bench", str(tmp_path), "--csv", str(tmp_path / "x.csv"), "--variants", "fast"]) == 3


def test_cactus_rows_count_solved_within_budget():
    rows = [{"variant": "proph", "outcome": "solution", "seconds": s} for s in (1.0, 3.0)]
    rows.append({"variant": "proph", "outcome": "timeout", "seconds": 9.0})
    got = cactus_rows(rows, ["proph"], [0.5, 1.0, 5.0])
    assert [r["solved"] for r in got] == [0, 1, 2]
