"""Blocking clauses learned from counterexamples and the store that prunes
emergent spaces with them."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Optional

from .lang import to_sexpr


@dataclass(frozen=True)
class Clause:
    """At least one listed hole must be filled by a different concept."""

    scope: tuple
    literals: frozenset  # {(hole-id, concept Expr)}

    @property
    def holes(self) -> frozenset:
        return frozenset(h for h, _ in self.literals)

    @property
    def empty(self) -> bool:
        return not self.literals

    def violated_by(self, assignment: Mapping) -> bool:
        return all(h in assignment and assignment[h] == c for h, c in self.literals)

    def __str__(self) -> str:
        if not self.literals:
            return "false"
        return " ∨ ".join(f"{h} ≠ {to_sexpr(c)}" for h, c in sorted(self.literals, key=lambda l: l[0]))


def generalize(cex, candidate) -> list:
    """One clause over the holes implicated by ``cex``, each fixed to the
    concept ``candidate`` used for it."""
    filled = candidate.assignment
    lits = frozenset((h, filled[h]) for h in cex.holes if h in filled)
    return [Clause(candidate.choices, lits)]


@dataclass
class StoreCounters:
    learned: int = 0
    duplicates: int = 0
    subsumed: int = 0  # new clauses dropped because a stronger one exists
    removed: int = 0  # stored clauses dropped by a stronger new one


class _Scope:
    __slots__ = ("holes", "pos", "by_max", "by_lit", "clauses", "dead")

    def __init__(self, holes):
        self.holes = list(holes)
        self.pos = {h: i for i, h in enumerate(self.holes)}
        self.by_max = [dict() for _ in self.holes]  # max pos -> {cid: [key]}
        self.by_lit = {}  # (pos, cid) -> set of keys
        self.clauses = {}  # key -> Clause; key is a sorted tuple of (pos, cid)
        self.dead = False


class ConstraintStore:
    """Per-scope clause sets with deduplication and subsumption.

    Literals are kept internally as ``(position, concept id)`` where the
    position follows the scope's concatenated hole order and the id comes
    from the concept cache the store is bound to.
    """

    def __init__(self, intern: Optional[Mapping] = None):
        self._intern = intern if intern is not None else {}
        self._unknown = {}
        self._scopes = {}
        self.counters = StoreCounters()

    def bind(self, intern: Mapping) -> None:
        """Use the concept ids of ``intern`` (Expr -> id)."""
        self._intern = intern

    def declare(self, scope: tuple, hole_ids) -> None:
        if scope not in self._scopes:
            self._scopes[scope] = _Scope(hole_ids)

    def _scope(self, scope) -> _Scope:
        return self._scopes[scope]

    def _cid(self, expr):
        cid = self._intern.get(expr)
        if cid is None:
            # concepts unknown to the cache get negative ids of their own
            cid = self._unknown.setdefault(expr, -1 - len(self._unknown))
        return cid

    # -- updates --

    def prune(self, clauses) -> None:
        for c in clauses:
            self.add(c)

    def add(self, clause: Clause) -> bool:
        """Insert; returns whether the store changed."""
        sc = self._scope(clause.scope)
        if clause.empty:
            changed = not sc.dead
            sc.dead = True
            self.counters.learned += changed
            return changed
        key = tuple(sorted((sc.pos[h], self._cid(c)) for h, c in clause.literals))
        if key in sc.clauses:
            self.counters.duplicates += 1
            return False
        lits = set(key)
        for p, cid in key:
            for other in sc.by_max[p].get(cid, ()):
                if lits.issuperset(other):
                    self.counters.subsumed += 1
                    return False
        supers = None
        for lit in key:
            s = sc.by_lit.get(lit, set())
            supers = set(s) if supers is None else supers & s
            if not supers:
                break
        for other in supers or ():
            self._remove(sc, other)
            self.counters.removed += 1
        sc.clauses[key] = clause
        p, cid = key[-1]
        sc.by_max[p].setdefault(cid, []).append(key)
        for lit in key:
            sc.by_lit.setdefault(lit, set()).add(key)
        self.counters.learned += 1
        return True

    def _remove(self, sc: _Scope, key) -> None:
        del sc.clauses[key]
        p, cid = key[-1]
        sc.by_max[p][cid].remove(key)
        for lit in key:
            sc.by_lit[lit].discard(key)

    # -- queries --

    def dead(self, scope) -> bool:
        sc = self._scopes.get(scope)
        return sc is not None and sc.dead

    def clauses(self, scope=None) -> list:
        scopes = [scope] if scope is not None else list(self._scopes)
        out = []
        for s in scopes:
            sc = self._scopes.get(s)
            if sc is None:
                continue
            if sc.dead:
                out.append(Clause(s, frozenset()))
            out.extend(sc.clauses.values())
        return out

    def __len__(self):
        return sum(len(sc.clauses) + sc.dead for sc in self._scopes.values())

    def _violated_at(self, sc: _Scope, p: int, items) -> Optional[tuple]:
        for key in sc.by_max[p].get(items[p], ()):
            if all(items[q] == cid for q, cid in key):
                return key
        return None

    def partial_checker(self, scope):
        """``check(p, items)``: whether the prefix ``items[:p + 1]`` of
        concept ids violates no clause that it fully assigns. Clauses are
        tested once, at their last hole."""
        sc = self._scope(scope)

        def check(p, items):
            if sc.dead:
                return False
            return self._violated_at(sc, p, items) is None
        return check

    def check_full_ids(self, scope, cids) -> bool:
        sc = self._scope(scope)
        if sc.dead:
            return False
        return all(self._violated_at(sc, p, cids) is None for p in range(len(cids)))

    def _first_violated(self, scope, filled: Mapping) -> Optional[Clause]:
        sc = self._scopes.get(scope)
        if sc is None:
            return None
        if sc.dead:
            return Clause(scope, frozenset())
        items = []
        for p, h in enumerate(sc.holes):
            if h not in filled:
                break
            items.append(self._cid(filled[h]))
            key = self._violated_at(sc, p, items)
            if key is not None:
                return sc.clauses[key]
        return None

    def check_full(self, scope, emergent) -> Optional[Clause]:
        """None if the complete emergent passes, else a violated clause."""
        filled = dict(emergent)
        sc = self._scopes.get(scope)
        if sc is not None and set(sc.holes) - set(filled):
            raise ValueError("emergent does not fill every hole of the scope")
        return self._first_violated(scope, filled)

    def check_partial(self, scope, assignment: Mapping) -> Optional[Clause]:
        """None unless some clause whose holes are all assigned is violated.
        The assigned holes must form a prefix of the scope's hole order."""
        sc = self._scopes.get(scope)
        if sc is not None:
            k = len(assignment)
            if set(assignment) != set(sc.holes[:k]):
                raise ValueError("assigned holes are not a prefix of the hole order")
        return self._first_violated(scope, assignment)

