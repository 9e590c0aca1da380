from dataclasses import replace

from hypothesis import given, settings, strategies as st

from recsynth.cgen import (
    CgenConfig, Checker, assignments, exhaustive_values, find_cex,
    joint_exhaustive, replay, weight,
)
from recsynth.lang import Type

from test_acceptance import INSERT_CASES, insert_candidate

SMALL = CgenConfig(int_bound=2, list_len=2, samples=5, max_exhaustive=10**6)


def test_exhaustive_domains():
    ints = exhaustive_values(Type.INT, SMALL)
    assert ints == (0, 1, -1, 2, -2)
    lists = exhaustive_values(Type.INTLIST, SMALL)
    assert len(lists) == 1 + 5 + 25 and lists[0] == ()
    assert exhaustive_values(Type.BOOL, SMALL) == (False, True)


def test_joint_domain_is_weight_ordered_and_complete():
    types = (Type.INT, Type.INTLIST)
    joint = joint_exhaustive(types, SMALL)
    assert len(joint) == len(set(joint)) == 5 * 31
    ws = [sum(weight(v) for v in t) for t in joint]
    assert ws == sorted(ws)
    assert joint[:2] == ((0, ()), (0, (0,)))


def test_joint_domain_cap():
    cfg = replace(SMALL, max_exhaustive=7)
    assert len(joint_exhaustive((Type.INTLIST, Type.INTLIST), cfg)) == 7


def test_random_tail_is_seeded_and_bounded():
    cfg = replace(SMALL, max_exhaustive=0, samples=50)
    a = list(assignments((Type.INTLIST,), cfg, "p"))
    assert a == list(assignments((Type.INTLIST,), cfg, "p"))
    assert a != list(assignments((Type.INTLIST,), cfg, "p", seed=9))
    assert all(len(v) <= 4 and all(abs(x) <= 4 for x in v) for (v,) in a)


def test_solution_has_no_counterexample(insert_bench):
    inst = insert_bench.instance
    good = dict(h1="(endp xs)", h2="(cons x nil)", h3="(head xs)", h4="x", h5="(tail xs)")
    assert find_cex(insert_candidate(inst, good), inst, insert_bench.config()) is None


def test_counterexamples_replay_on_their_own_candidate(insert_bench):
    inst, cfg = insert_bench.instance, insert_bench.config()
    for fills, want, _ in INSERT_CASES:
        cand = insert_candidate(inst, fills)
        cex = find_cex(cand, inst, cfg)
        assert str(cex) == want
        assert replay(cex, cand.defs, inst, cfg)


def test_pass_cache(insert_bench):
    inst = insert_bench.instance
    good = dict(h1="(endp xs)", h2="(cons x nil)", h3="(head xs)", h4="x", h5="(tail xs)")
    checker = Checker(inst, insert_bench.config())
    cand = insert_candidate(inst, good)
    assert checker.find(cand) is None
    n = checker.evaluations
    assert checker.find(cand) is None
    assert checker.evaluations == n and checker.cache_hits > 0


@settings(max_examples=30, deadline=None)
@given(st.data())
def test_random_candidates_counterexamples_replay(insert_bench, data):
    """Whatever the search reports must reproduce on the same candidate."""
    from recsynth.enumeration import ConceptSpace
    from recsynth.lang import to_sexpr
    inst, cfg = insert_bench.instance, insert_bench.config()
    cs = ConceptSpace(inst.grammar, inst.size_bound)
    cs.all()
    body = inst.functions[0].sketch.bodies[0]
    fills = {h.id: to_sexpr(cs.concepts[data.draw(st.sampled_from(cs.by_nt[h.nts[0]]))])
             for h in body.holes}
    cand = insert_candidate(inst, fills)
    cex = find_cex(cand, inst, cfg)
    if cex is not None:
        assert cex.holes <= set(body.hole_ids)
        assert replay(cex, cand.defs, inst, cfg)
