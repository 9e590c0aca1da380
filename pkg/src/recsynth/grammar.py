"""Typed normal-form regular tree grammars (no start symbol, no chain or
epsilon rules) and the generation relation for concepts."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Union

from .lang import (
    ANY, BoolConst, Call, Expr, If, IntConst, NilConst, Theory, Type, Var,
    to_sexpr,
)


@dataclass(frozen=True)
class NonTerminal:
    name: str
    type: Type


@dataclass(frozen=True)
class Terminal:
    nt: str
    atom: Expr  # Var or constant


@dataclass(frozen=True)
class App:
    nt: str
    fn: str
    rhs: tuple  # non-terminal names


Rule = Union[Terminal, App]


@dataclass
class Grammar:
    nts: dict  # name -> Type, declaration order
    rules: list = field(default_factory=list)  # declaration order

    @property
    def nonterminals(self) -> list:
        return [NonTerminal(n, t) for n, t in self.nts.items()]

    @property
    def terminals(self) -> dict:
        """Variables of the grammar (Sigma) with their types."""
        out = {}
        for r in self.rules:
            if isinstance(r, Terminal) and type(r.atom) is Var:
                out.setdefault(r.atom.name, self.nts.get(r.nt))
        return out

    @property
    def symbols(self) -> set:
        """Function symbols used by application rules (Lambda)."""
        return {r.fn for r in self.rules if isinstance(r, App)}

    def rules_for(self, nt: str) -> list:
        return [r for r in self.rules if r.nt == nt]

    def reachable(self, start: Iterable[str]) -> set:
        seen = set()
        todo = list(start)
        while todo:
            n = todo.pop()
            if n in seen:
                continue
            seen.add(n)
            for r in self.rules_for(n):
                if isinstance(r, App):
                    todo.extend(r.rhs)
        return seen

    def to_sexpr(self) -> str:
        parts = []
        for n, t in self.nts.items():
            alts = []
            for r in self.rules_for(n):
                if isinstance(r, Terminal):
                    alts.append(to_sexpr(r.atom))
                else:
                    alts.append("(" + " ".join((r.fn,) + r.rhs) + ")")
            parts.append(f"({n} {t}" + "".join(" " + a for a in alts) + ")")
        return "(grammar " + " ".join(parts) + ")"


def _atom_type(atom: Expr):
    t = type(atom)
    if t is IntConst:
        return Type.INT
    if t is BoolConst:
        return Type.BOOL
    if t is NilConst:
        return Type.INTLIST
    return None


def validate(grammar: Grammar, theory: Theory, synth_names: Iterable[str] = ()) -> list:
    """Located grammar errors; empty when the grammar is well formed."""
    errors = []
    synth = set(synth_names)
    var_types = {}
    for i, r in enumerate(grammar.rules):
        where = f"rule {i + 1} ({r.nt})"
        if r.nt not in grammar.nts:
            errors.append(f"{where}: undeclared non-terminal {r.nt}")
            continue
        want = grammar.nts[r.nt]
        if isinstance(r, Terminal):
            if type(r.atom) is Var:
                prev = var_types.setdefault(r.atom.name, want)
                if prev is not want:
                    errors.append(f"{where}: variable {r.atom.name} used at types {prev} and {want}")
            else:
                got = _atom_type(r.atom)
                if got is None:
                    errors.append(f"{where}: terminal must be a variable or constant")
                elif got is not want:
                    errors.append(f"{where}: constant {to_sexpr(r.atom)} has type {got}, not {want}")
            continue
        if r.fn in synth:
            errors.append(f"{where}: {r.fn} is under synthesis and cannot appear in a grammar")
            continue
        if r.fn not in theory:
            errors.append(f"{where}: unknown function {r.fn}")
            continue
        bg = theory[r.fn]
        if bg.arity != len(r.rhs):
            errors.append(f"{where}: {r.fn} expects {bg.arity} arguments, rule gives {len(r.rhs)}")
            continue
        missing = [n for n in r.rhs if n not in grammar.nts]
        if missing:
            errors.append(f"{where}: undeclared non-terminal(s) {', '.join(missing)}")
            continue
        rhs_types = [grammar.nts[n] for n in r.rhs]
        if any(a is ANY for a in bg.arg_types):
            if len(set(rhs_types)) > 1:
                errors.append(f"{where}: arguments of {r.fn} must share a type")
        else:
            for j, (a, b) in enumerate(zip(bg.arg_types, rhs_types)):
                if a is not b:
                    errors.append(f"{where}: argument {j + 1} of {r.fn} is {b}, expected {a}")
        if bg.ret is not want:
            errors.append(f"{where}: {r.fn} returns {bg.ret}, but {r.nt} is {want}")
    return errors


def generates(grammar: Grammar, nt: str, expr: Expr) -> bool:
    """Whether ``expr`` is derivable from ``nt``."""
    terminals = {}
    apps = {}
    for r in grammar.rules:
        if isinstance(r, Terminal):
            terminals.setdefault(r.nt, set()).add(r.atom)
        else:
            apps.setdefault(r.nt, []).append(r)

    @lru_cache(maxsize=None)
    def gen(n, e):
        if type(e) is Call:
            return any(r.fn == e.fn and len(r.rhs) == len(e.args)
                       and all(gen(m, a) for m, a in zip(r.rhs, e.args))
                       for r in apps.get(n, ()))
        if type(e) is If:
            return False
        return e in terminals.get(n, ())

    return gen(nt, expr)


def size(expr: Expr) -> int:
    t = type(expr)
    if t is Call:
        return 1 + sum(size(a) for a in expr.args)
    if t is If:
        return 1 + size(expr.cond) + size(expr.then) + size(expr.else_)
    return 1
