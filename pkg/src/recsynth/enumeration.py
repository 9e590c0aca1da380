"""Lazy duplicate-free enumeration of concepts, emergents and candidates.

Concepts are numbered by arrival in the cache and everything downstream works
on these numbers. A membership event ``(cid, nt)`` records that concept
``cid`` became available for non-terminal ``nt``. Each event appends lazy
products that cover exactly the tuples in which the new member is the most
recent one, so the union of a chain covers every tuple once.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from itertools import product
from typing import Callable, Optional

from .grammar import App, Grammar, Terminal
from .lang import Call
from .sketch import Candidate, SketchBody, complete

NOGEN = "nogen"
RETRO = "retro"
PROPH = "proph"
VARIANTS = (NOGEN, RETRO, PROPH)


class LazyProduct:
    """Row-major product over index ranges ``(list, lo, hi)``.

    :meth:`next` accepts a prefix check ``check(p, items)`` that judges the
    prefix ``items[:p + 1]``. A failing prefix skips its whole subtree. The
    cursor is revalidated from the first position on every call, so the
    check may change between calls.
    """

    __slots__ = ("ranges", "cur", "done", "backtracks")

    def __init__(self, ranges):
        self.ranges = list(ranges)
        self.cur = [lo for _, lo, _ in self.ranges]
        self.done = any(lo >= hi for _, lo, hi in self.ranges)
        self.backtracks = 0

    def __len__(self):
        n = 1
        for _, lo, hi in self.ranges:
            n *= max(hi - lo, 0)
        return n

    def _bump(self, p):
        cur = self.cur
        cur[p] += 1
        for q in range(p + 1, len(cur)):
            cur[q] = self.ranges[q][1]

    def next(self, check: Optional[Callable] = None):
        if self.done:
            return None
        k = len(self.ranges)
        if k == 0:
            self.done = True
            return ()
        ranges, cur = self.ranges, self.cur
        items = []
        p = 0
        while True:
            if p == k:
                out = tuple(items)
                self._bump(k - 1)
                return out
            lst, lo, hi = ranges[p]
            if cur[p] >= hi:
                if p == 0:
                    self.done = True
                    return None
                p -= 1
                items.pop()
                self._bump(p)
                continue
            items.append(lst[cur[p]])
            if check is None or check(p, items):
                p += 1
            else:
                items.pop()
                self.backtracks += 1
                self._bump(p)

    def __iter__(self):
        while True:
            t = self.next()
            if t is None:
                return
            yield t


def event_products(slots, lists, gained):
    """Products for one membership event.

    ``lists[q]`` is the current list of slot ``q`` and ``gained`` the set of
    slots whose list just grew by its last element. Pins run in descending
    slot order; slots left of the pin exclude the new element.
    """
    out = []
    for p in sorted(gained, reverse=True):
        ranges = []
        for q in range(len(slots)):
            lst = lists[q]
            n = len(lst)
            if q == p:
                ranges.append((lst, n - 1, n))
            elif q < p and q in gained:
                ranges.append((lst, 0, n - 1))
            else:
                ranges.append((lst, 0, n))
        out.append(LazyProduct(ranges))
    return out


@dataclass
class ConceptEvent:
    cid: int
    expr: object
    nts: frozenset  # non-terminals the concept just became available for


class ConceptSpace:
    """Bounded, cached, FIFO enumeration of grammar concepts."""

    def __init__(self, grammar: Grammar, bound: int):
        self.grammar = grammar
        self.bound = bound
        self.concepts = []
        self.sizes = []
        self.nts_of = []
        self.index = {}  # Expr -> cid
        self.by_nt = {n: [] for n in grammar.nts}
        self._terminals = deque(r for r in grammar.rules if isinstance(r, Terminal))
        self._apps = [r for r in grammar.rules if isinstance(r, App)]
        self._chain = deque()
        self.exhausted = False

    def __len__(self):
        return len(self.concepts)

    def _size_ok(self, p, items):
        k = len(items)
        total = sum(self.sizes[c] for c in items)
        return total + 1 + (self._arity - k) <= self.bound

    def _admit(self, expr, size, nt):
        cid = self.index.get(expr)
        if cid is None:
            cid = len(self.concepts)
            self.index[expr] = cid
            self.concepts.append(expr)
            self.sizes.append(size)
            self.nts_of.append({nt})
        elif nt in self.nts_of[cid]:
            return None
        else:
            self.nts_of[cid].add(nt)
        self.by_nt[nt].append(cid)
        for r in self._apps:
            gained = {q for q, m in enumerate(r.rhs) if m == nt}
            if gained:
                lists = [self.by_nt[m] for m in r.rhs]
                for prod in event_products(r.rhs, lists, gained):
                    self._chain.append((r, prod))
        return ConceptEvent(cid, expr, frozenset({nt}))

    def next(self) -> Optional[ConceptEvent]:
        while self._terminals:
            r = self._terminals.popleft()
            if self.bound < 1:
                continue
            ev = self._admit(r.atom, 1, r.nt)
            if ev is not None:
                return ev
        while self._chain:
            r, prod = self._chain[0]
            self._arity = len(r.rhs)
            t = prod.next(self._size_ok)
            if t is None:
                self._chain.popleft()
                continue
            expr = Call(r.fn, tuple(self.concepts[c] for c in t))
            ev = self._admit(expr, 1 + sum(self.sizes[c] for c in t), r.nt)
            if ev is not None:
                return ev
        self.exhausted = True
        return None

    def all(self) -> list:
        """Drain the space; returns every concept in arrival order."""
        while self.next() is not None:
            pass
        return list(self.concepts)


@dataclass
class Counters:
    materialized: int = 0  # full tuples built
    full_rejections: int = 0
    partial_backtracks: int = 0
    emitted: int = 0


class EmergentSpace:
    """Tuples of concept ids for the concatenated holes of one scope."""

    def __init__(self, scope: tuple, holes: list, variant: str = NOGEN,
                 store=None, counters: Optional[Counters] = None):
        self.scope = scope
        self.holes = list(holes)  # HoleDecl, concatenated across functions
        self.variant = variant
        self.store = store
        self.counters = counters if counters is not None else Counters()
        self.lists = [[] for _ in self.holes]
        self._members = [set() for _ in self.holes]
        self._chain = deque()
        self._check = None
        if store is not None and variant == PROPH:
            self._check = store.partial_checker(scope)

    def add_concept(self, ev: ConceptEvent) -> None:
        gained = set()
        for q, h in enumerate(self.holes):
            if ev.cid not in self._members[q] and not ev.nts.isdisjoint(h.nts):
                self._members[q].add(ev.cid)
                self.lists[q].append(ev.cid)
                gained.add(q)
        if gained:
            self._chain.extend(event_products(self.holes, self.lists, gained))

    def next(self) -> Optional[tuple]:
        c = self.counters
        store = self.store
        if store is not None and self.variant != NOGEN and store.dead(self.scope):
            self._chain.clear()
            return None
        while self._chain:
            prod = self._chain[0]
            before = prod.backtracks
            t = prod.next(self._check)
            c.partial_backtracks += prod.backtracks - before
            if t is None:
                self._chain.popleft()
                continue
            c.materialized += 1
            if self.variant == RETRO and store is not None and not store.check_full_ids(self.scope, t):
                c.full_rejections += 1
                continue
            c.emitted += 1
            return t
        return None


class CandidateSpace:
    """Candidates over all body choices; the loop of lazy candidate
    enumeration over emergent spaces and the concept space."""

    def __init__(self, functions: list, grammar: Grammar, bound: int,
                 variant: str = NOGEN, store=None):
        if variant not in VARIANTS:
            raise ValueError(f"unknown variant {variant}")
        self.functions = list(functions)
        self.concepts = ConceptSpace(grammar, bound)
        self.counters = Counters()
        self.variant = variant
        self.store = store
        self.spaces = []
        self._bodies = {}
        for choice in product(*[range(len(f.sketch.bodies)) for f in self.functions]):
            bodies = [f.sketch.bodies[i] for f, i in zip(self.functions, choice)]
            holes = [h for b in bodies for h in b.holes]
            if store is not None:
                store.declare(choice, [h.id for h in holes])
            self._bodies[choice] = bodies
            self.spaces.append(EmergentSpace(choice, holes, variant, store, self.counters))

    def scope_holes(self, scope) -> list:
        return [h.id for b in self._bodies[scope] for h in b.holes]

    def next(self) -> Optional[Candidate]:
        while True:
            for sp in self.spaces:
                t = sp.next()
                if t is not None:
                    return self.candidate(sp.scope, t)
            ev = self.concepts.next()
            if ev is None:
                return None
            for sp in self.spaces:
                sp.add_concept(ev)

    def candidate(self, scope: tuple, cids: tuple) -> Candidate:
        concepts = self.concepts.concepts
        ems = []
        defs = {}
        i = 0
        for f, body in zip(self.functions, self._bodies[scope]):
            k = len(body.holes)
            em = tuple((h.id, concepts[c]) for h, c in zip(body.holes, cids[i:i + k]))
            i += k
            ems.append(em)
            defs[f.name] = complete(f, body, em)
        return Candidate(scope, tuple(ems), defs)


def brute_force_concepts(grammar: Grammar, nt: str, bound: int) -> set:
    """Every expression of size at most ``bound`` derivable from ``nt``, by
    direct recursion over derivations."""
    memo = {}

    def gen(n, s):
        # expressions of size exactly s from n
        key = (n, s)
        if key in memo:
            return memo[key]
        out = set()
        for r in grammar.rules_for(n):
            if isinstance(r, Terminal):
                if s == 1:
                    out.add(r.atom)
            else:
                for parts in _splits(s - 1, len(r.rhs)):
                    for args in product(*[gen(m, k) for m, k in zip(r.rhs, parts)]):
                        out.add(Call(r.fn, tuple(args)))
        memo[key] = out
        return out

    return {e for s in range(1, bound + 1) for e in gen(nt, s)}


def _splits(total, k):
    if k == 0:
        if total == 0:
            yield ()
        return
    for first in range(1, total - k + 2):
        for rest in _splits(total - first, k - 1):
            yield (first,) + rest


def brute_force_emergents(body: SketchBody, grammar: Grammar, bound: int) -> set:
    per_hole = []
    for h in body.holes:
        s = set()
        for n in h.nts:
            s |= brute_force_concepts(grammar, n, bound)
        per_hole.append(sorted(s, key=repr))
    return {tuple(zip(body.hole_ids, t)) for t in product(*per_hole)}

