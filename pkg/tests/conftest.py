from __future__ import annotations

import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from recsynth.bench import builtin_benchmarks, load_benchmark, parse_benchmark  # noqa: E402
from recsynth.cgen import CgenConfig  # noqa: E402
from recsynth.driver import synth  # noqa: E402
from recsynth.sexpr import read_all  # noqa: E402
from recsynth.bench import parse_expr  # noqa: E402
from recsynth.skolem import reduce_instance  # noqa: E402

SUITE_TIMEOUT = 120.0  # seconds per run
SEEDS = (1, 2, 3)

_results: list = []


def E(text: str):
    """Parse one expression (holes allowed)."""
    return parse_expr(read_all(text)[0], holes_ok=True)


@pytest.fixture
def expr():
    return E


@pytest.fixture(scope="session")
def insert_bench():
    return load_benchmark(builtin_dir_path("insert"))


def builtin_dir_path(name):
    for p in builtin_benchmarks():
        if p.stem == name:
            return p
    raise KeyError(name)


@pytest.fixture(scope="session")
def bench_text():
    def parse(text, **kw):
        return parse_benchmark(text, **kw)
    return parse


class SuiteRuns:
    """Memoized runs of the shipped suite; shared by the acceptance tests so
    each (benchmark, variant, seed) is synthesized once per session."""

    def __init__(self):
        self.files = {p.stem: load_benchmark(p) for p in builtin_benchmarks()}
        self._runs = {}

    @property
    def names(self):
        return sorted(self.files)

    def instance(self, name):
        return reduce_instance(self.files[name].instance)

    def config(self, name, seed):
        return self.files[name].config(CgenConfig(seed=seed))

    def run(self, name, variant, seed=1):
        key = (name, variant, seed)
        if key not in self._runs:
            self._runs[key] = synth(self.instance(name), variant, self.config(name, seed),
                                    timeout=SUITE_TIMEOUT, record=(variant != "nogen"),
                                    name=name, log_candidates=(variant != "nogen"))
        return self._runs[key]


@pytest.fixture(scope="session")
def suite():
    return SuiteRuns()


@pytest.fixture
def report():
    """``report(criterion, ok, detail)`` records one acceptance line."""
    def rec(criterion, ok, detail=""):
        _results.append((criterion, bool(ok), detail))
        return ok
    return rec


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for criterion, ok, detail in _results:
        line = f"{'PASS' if ok else 'FAIL'}  {criterion}"
        if detail:
            line += f"  ({detail})"
        terminalreporter.write_line(line)
