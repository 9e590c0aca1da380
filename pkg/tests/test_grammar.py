from hypothesis import given, settings, strategies as st

from conftest import E
from recsynth.enumeration import brute_force_concepts
from recsynth.grammar import App, Grammar, Terminal, generates, size, validate
from recsynth.lang import Type, Var, standard_theory

import tiny

THEORY = standard_theory()


def test_size():
    assert size(E("x")) == 1
    assert size(E("(+ x (+ x x))")) == 5
    assert size(E("(< x (head xs))")) == 4


def test_generates(insert_bench):
    g = insert_bench.instance.grammar
    assert generates(g, "L", E("(cons x (tail xs))"))
    assert generates(g, "B", E("(endp nil)"))
    assert not generates(g, "I", E("xs"))
    assert not generates(g, "L", E("(append xs xs)"))


def test_validate_flags_bad_grammars():
    g = Grammar({"I": Type.INT}, [Terminal("I", Var("x")), App("I", "+", ("I", "J"))])
    assert validate(g, THEORY)
    g = Grammar({"I": Type.INT}, [App("I", "cons", ("I", "I"))])
    assert validate(g, THEORY)
    g = Grammar({"I": Type.INT}, [Terminal("I", Var("x")), App("I", "+", ("I", "I"))])
    assert validate(g, THEORY) == []


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000))
def test_brute_force_concepts_are_generated(seed):
    g, _, bound = tiny.random_instance(seed)
    for nt in g.nts:
        for e in brute_force_concepts(g, nt, bound):
            assert size(e) <= bound
            assert generates(g, nt, e)
