import pytest

from recsynth.bench import parse_benchmark
from recsynth.cgen import CgenConfig
from recsynth.driver import (
    EXHAUSTED, SOLUTION, TIMED_OUT, InstanceError, solve, synth,
)

from test_bench import MINI
from test_skolem import EXISTENTIAL

CFG = CgenConfig(samples=20)


@pytest.mark.parametrize("variant", ["nogen", "retro", "proph"])
def test_mini_solves(variant):
    inst = parse_benchmark(MINI).instance
    res = synth(inst, variant, CFG)
    assert res.status == SOLUTION
    assert res.program_text() == "(definec f (x :int xs :int-list) :int-list (cons x xs))"
    assert res.stats.outcome == SOLUTION and res.stats.solution_size == 2


def test_unsatisfiable_instance_is_exhausted():
    text = MINI.replace("(= (head (f x xs)) x)", "(not (= (f x xs) (f x xs)))")
    res = synth(parse_benchmark(text).instance, "proph", CFG)
    assert res.status == EXHAUSTED and not res.solved


def test_zero_timeout():
    res = synth(parse_benchmark(MINI).instance, "proph", CFG, timeout=0)
    assert res.status == TIMED_OUT


def test_existential_needs_solve():
    inst = parse_benchmark(EXISTENTIAL).instance
    with pytest.raises(InstanceError):
        synth(inst)
    res = solve(inst, "proph", CFG)
    assert res.solved and set(res.defs) == {"f", "y"}


def test_record_and_history(insert_bench):
    inst = insert_bench.instance
    res = synth(inst, "proph", insert_bench.config(), record=True, log_candidates=True)
    assert res.solved
    assert len(res.history) == res.stats.candidates
    assert res.learned and all(str(item.clause) for item in res.learned)
    assert res.stats.clauses <= len(res.learned)
    nogen = synth(inst, "nogen", insert_bench.config())
    assert nogen.stats.candidates >= res.stats.candidates
    assert nogen.stats.clauses == 0


def test_invalid_instance_is_rejected():
    inst = parse_benchmark(MINI).instance
    inst.size_bound = 0
    with pytest.raises(InstanceError):
        synth(inst)
