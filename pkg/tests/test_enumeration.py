from itertools import product

from hypothesis import given, settings, strategies as st

from recsynth.enumeration import (
    CandidateSpace, ConceptSpace, LazyProduct, brute_force_concepts,
    brute_force_emergents, event_products,
)
from recsynth.grammar import size

import tiny


def test_lazy_product_row_major():
    a, b = [0, 1], ["x", "y", "z"]
    assert list(LazyProduct([(a, 0, 2), (b, 1, 3)])) == [(0, "y"), (0, "z"), (1, "y"), (1, "z")]
    assert list(LazyProduct([(a, 0, 0), (b, 0, 3)])) == []
    assert list(LazyProduct([])) == [()]


@given(st.lists(st.integers(1, 4), min_size=1, max_size=4), st.integers(0, 100))
def test_prefix_check_skips_exactly_the_failing_subtrees(dims, seed):
    import random
    rng = random.Random(seed)
    bad = {tuple(rng.randrange(d) for d in dims[:k]) for k in range(1, len(dims) + 1)
           for _ in range(2)}
    lists = [list(range(d)) for d in dims]

    def ok(p, items):
        return tuple(items[:p + 1]) not in bad

    lp = LazyProduct([(lst, 0, len(lst)) for lst in lists])
    got = []
    while (t := lp.next(ok)) is not None:
        got.append(t)
    want = [t for t in product(*lists)
            if all(t[:k] not in bad for k in range(1, len(t) + 1))]
    assert got == want


@settings(max_examples=60)
@given(st.lists(st.integers(0, 2), min_size=1, max_size=12), st.integers(1, 3))
def test_event_products_cover_each_tuple_once(events, k):
    """Elements arrive one at a time into some slots; the union of all
    event products is the full product with no repeats."""
    lists = [[] for _ in range(k)]
    seen = []
    for i, slot_mask in enumerate(events):
        gained = {q for q in range(k) if (q + slot_mask) % 2 == 0 or q == slot_mask % k}
        for q in gained:
            lists[q].append(i)
        for lp in event_products(range(k), lists, gained):
            seen.extend(lp)
    assert len(seen) == len(set(seen))
    assert set(seen) == set(product(*lists))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 100_000))
def test_concept_space_matches_brute_force(seed):
    g, _, bound = tiny.random_instance(seed)
    cs = ConceptSpace(g, bound)
    cs.all()
    assert len(cs.concepts) == len(set(cs.concepts))
    for nt in g.nts:
        got = [cs.concepts[c] for c in cs.by_nt[nt]]
        assert len(got) == len(set(got))
        assert set(got) == brute_force_concepts(g, nt, bound)
    # recorded sizes match the expressions
    assert all(size(c) == s for c, s in zip(cs.concepts, cs.sizes))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 100_000))
def test_nogen_stream_is_the_full_product(seed):
    g, f, bound = tiny.random_instance(seed)
    space = CandidateSpace([f], g, bound, "nogen")
    out = []
    while (c := space.next()) is not None:
        out.append(c.emergents[0])
    assert len(out) == len(set(out))
    assert set(out) == brute_force_emergents(f.sketch.bodies[0], g, bound)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 100_000))
def test_retro_and_proph_agree_under_injected_clauses(seed):
    g, f, bound = tiny.random_instance(seed)
    r, rc = tiny.run_with_injection(g, f, bound, "retro", seed)
    p, pc = tiny.run_with_injection(g, f, bound, "proph", seed)
    assert r == p
    assert pc.materialized <= rc.materialized


def test_multi_body_scopes_are_all_enumerated(bench_text):
    from test_bench import MINI
    text = MINI.replace(":sketch ((cons ?a ?b))", ":sketch ((cons ?a ?b) ?c)").replace(
        ":holes ((?a I) (?b L))", ":holes ((?a I) (?b L) (?c L))")
    inst = bench_text(text).instance
    space = CandidateSpace(inst.functions, inst.grammar, inst.size_bound, "nogen")
    scopes = set()
    while (c := space.next()) is not None:
        scopes.add(c.choices)
    assert scopes == {(0,), (1,)}
