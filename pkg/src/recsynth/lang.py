"""The object language: types, expressions, runtime values, function
definitions and the background theory.

Runtime values are plain Python objects: ``int`` for Int, ``bool`` for Bool
and a ``tuple`` of ints for IntList. Programs are typechecked before they
run, so the ``True == 1`` coincidence of Python never leaks into semantics.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Callable, Mapping, Optional, Sequence, Union


class Type(enum.Enum):
    INT = ":int"
    BOOL = ":bool"
    INTLIST = ":int-list"

    def __str__(self) -> str:
        return self.value

    @classmethod
    def parse(cls, keyword: str) -> "Type":
        for t in cls:
            if t.value == keyword:
                return t
        raise ValueError(f"unknown type {keyword!r}")


Value = Union[int, bool, tuple]


def type_of_value(v: Value) -> Type:
    if isinstance(v, bool):
        return Type.BOOL
    if isinstance(v, int):
        return Type.INT
    if isinstance(v, tuple) and all(type(x) is int for x in v):
        return Type.INTLIST
    raise TypeError(f"not an object-language value: {v!r}")


# -- expressions -----------------------------------------------------------
#
# ``prov`` is the hole-provenance tag. It is excluded from equality and
# hashing, so a tagged copy of a concept compares equal to the concept.


@dataclass(frozen=True, slots=True)
class Var:
    name: str
    prov: Optional[str] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True, slots=True)
class IntConst:
    value: int
    prov: Optional[str] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True, slots=True)
class BoolConst:
    value: bool
    prov: Optional[str] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True, slots=True)
class NilConst:
    prov: Optional[str] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True, slots=True)
class If:
    cond: "Expr"
    then: "Expr"
    else_: "Expr"
    prov: Optional[str] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True, slots=True)
class Call:
    fn: str
    args: tuple
    prov: Optional[str] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True, slots=True)
class Hole:
    """A hole reference inside a sketch skeleton. Never appears in a
    completed definition."""

    id: str
    prov: Optional[str] = field(default=None, compare=False, repr=False)


Expr = Union[Var, IntConst, BoolConst, NilConst, If, Call, Hole]
ATOMS = (Var, IntConst, BoolConst, NilConst)


def const_of_value(v: Value) -> Expr:
    t = type_of_value(v)
    if t is Type.BOOL:
        return BoolConst(v)
    if t is Type.INT:
        return IntConst(v)
    out: Expr = NilConst()
    for x in reversed(v):
        out = Call("cons", (IntConst(x), out))
    return out


def children(e: Expr) -> tuple:
    if type(e) is If:
        return (e.cond, e.then, e.else_)
    if type(e) is Call:
        return e.args
    return ()


def walk(e: Expr):
    """Pre-order traversal."""
    stack = [e]
    while stack:
        n = stack.pop()
        yield n
        stack.extend(reversed(children(n)))


def free_vars(e: Expr) -> set:
    return {n.name for n in walk(e) if type(n) is Var}


def called_fns(e: Expr) -> set:
    return {n.fn for n in walk(e) if type(n) is Call}


def hole_ids(e: Expr) -> list:
    """Hole references of a skeleton in document order."""
    return [n.id for n in walk(e) if type(n) is Hole]


def tag(e: Expr, hole: str) -> Expr:
    """Copy of ``e`` with every node tagged as coming from ``hole``."""
    t = type(e)
    if t is Var:
        return Var(e.name, hole)
    if t is IntConst:
        return IntConst(e.value, hole)
    if t is BoolConst:
        return BoolConst(e.value, hole)
    if t is NilConst:
        return NilConst(hole)
    if t is If:
        return If(tag(e.cond, hole), tag(e.then, hole), tag(e.else_, hole), hole)
    if t is Call:
        return Call(e.fn, tuple(tag(a, hole) for a in e.args), hole)
    raise TypeError(f"cannot tag {e!r}")


def substitute_vars(e: Expr, mapping: Mapping[str, Expr]) -> Expr:
    t = type(e)
    if t is Var:
        return mapping.get(e.name, e)
    if t is If:
        return If(substitute_vars(e.cond, mapping), substitute_vars(e.then, mapping),
                  substitute_vars(e.else_, mapping), e.prov)
    if t is Call:
        return Call(e.fn, tuple(substitute_vars(a, mapping) for a in e.args), e.prov)
    return e


def to_sexpr(e: Expr) -> str:
    t = type(e)
    if t is Var:
        return e.name
    if t is IntConst:
        return str(e.value)
    if t is BoolConst:
        return "true" if e.value else "false"
    if t is NilConst:
        return "nil"
    if t is Hole:
        return "?" + e.id
    if t is If:
        return f"(if {to_sexpr(e.cond)} {to_sexpr(e.then)} {to_sexpr(e.else_)})"
    if t is Call:
        if not e.args:
            return f"({e.fn})"
        return "(" + e.fn + " " + " ".join(to_sexpr(a) for a in e.args) + ")"
    raise TypeError(f"not an expression: {e!r}")


def show_value(v: Value) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, int):
        return str(v)
    if not v:
        return "nil"
    return "(" + " ".join(str(x) for x in v) + ")"


# -- definitions -------------------------------------------------------------


@dataclass(frozen=True)
class FnDef:
    name: str
    params: tuple  # ((name, Type), ...)
    ret: Type
    body: Expr
    measure: Optional[Expr] = None

    @property
    def param_names(self) -> tuple:
        return tuple(p for p, _ in self.params)

    def to_sexpr(self) -> str:
        ps = " ".join(f"{p} {t}" for p, t in self.params)
        return f"(definec {self.name} ({ps}) {self.ret} {to_sexpr(self.body)})"


ANY = None  # wildcard argument type of polymorphic `=`


@dataclass(frozen=True)
class BackgroundFn:
    name: str
    arg_types: tuple
    ret: Type
    impl: Callable
    contract: Optional[Callable] = None  # None is the tautology
    lazy: bool = False  # short-circuit boolean connective

    @property
    def arity(self) -> int:
        return len(self.arg_types)


Theory = dict  # fn-symbol -> BackgroundFn


def _nonempty(xs):
    return len(xs) > 0


def _nth(i, xs):
    return xs[i]


def _sorted(xs):
    return all(a <= b for a, b in zip(xs, xs[1:]))


def _repeat(v, n):
    return (v,) * max(n, 0)


def standard_theory() -> Theory:
    I, B, L = Type.INT, Type.BOOL, Type.INTLIST
    fns = [
        BackgroundFn("head", (L,), I, lambda xs: xs[0], _nonempty),
        BackgroundFn("tail", (L,), L, lambda xs: xs[1:], _nonempty),
        BackgroundFn("cons", (I, L), L, lambda x, xs: (x,) + xs),
        BackgroundFn("endp", (L,), B, lambda xs: not xs),
        BackgroundFn("nil", (), L, lambda: ()),
        BackgroundFn("member", (I, L), B, lambda x, xs: x in xs),
        BackgroundFn("len", (L,), I, len),
        BackgroundFn("length", (L,), I, len),
        BackgroundFn("append", (L, L), L, lambda xs, ys: xs + ys),
        BackgroundFn("rev", (L,), L, lambda xs: xs[::-1]),
        BackgroundFn("sorted", (L,), B, _sorted),
        BackgroundFn("repeat", (I, I), L, _repeat),
        BackgroundFn("alleq", (I, L), B, lambda v, xs: all(x == v for x in xs)),
        BackgroundFn("nth", (I, L), I, _nth, lambda i, xs: 0 <= i < len(xs)),
        BackgroundFn("+", (I, I), I, lambda a, b: a + b),
        BackgroundFn("-", (I, I), I, lambda a, b: a - b),
        BackgroundFn("min", (I, I), I, min),
        BackgroundFn("max", (I, I), I, max),
        BackgroundFn("<", (I, I), B, lambda a, b: a < b),
        BackgroundFn("<=", (I, I), B, lambda a, b: a <= b),
        BackgroundFn(">", (I, I), B, lambda a, b: a > b),
        BackgroundFn(">=", (I, I), B, lambda a, b: a >= b),
        BackgroundFn("=", (ANY, ANY), B, lambda a, b: a == b),
        BackgroundFn("not", (B,), B, lambda a: not a),
        BackgroundFn("and", (B, B), B, lambda a, b: a and b, lazy=True),
        BackgroundFn("or", (B, B), B, lambda a, b: a or b, lazy=True),
        BackgroundFn("=>", (B, B), B, lambda a, b: (not a) or b, lazy=True),
    ]
    return {f.name: f for f in fns}


# -- typechecking -------------------------------------------------------------


class LangError(Exception):
    """Located error in an object-language construct."""

    def __init__(self, message: str, node=None):
        where = f" in {to_sexpr(node)}" if node is not None and not isinstance(node, str) else ""
        super().__init__(message + where)
        self.node = node


class TypeCheckError(LangError):
    pass


def typecheck(expr: Expr, env: Mapping[str, Type], theory: Theory,
              synth_sigs: Mapping[str, tuple] = {},
              holes: Mapping[str, Type] = {}) -> Type:
    """Type of ``expr``. ``synth_sigs`` maps functions under synthesis to
    ``(arg_types, ret)``; ``holes`` gives the types of hole references."""
    t = type(expr)
    if t is Var:
        if expr.name not in env:
            raise TypeCheckError(f"unbound variable {expr.name}", expr)
        return env[expr.name]
    if t is IntConst:
        return Type.INT
    if t is BoolConst:
        return Type.BOOL
    if t is NilConst:
        return Type.INTLIST
    if t is Hole:
        if expr.id not in holes:
            raise TypeCheckError(f"undeclared hole {expr.id}", expr)
        return holes[expr.id]
    if t is If:
        c = typecheck(expr.cond, env, theory, synth_sigs, holes)
        if c is not Type.BOOL:
            raise TypeCheckError(f"if condition has type {c}, expected :bool", expr)
        a = typecheck(expr.then, env, theory, synth_sigs, holes)
        b = typecheck(expr.else_, env, theory, synth_sigs, holes)
        if a is not b:
            raise TypeCheckError(f"if branches disagree: {a} vs {b}", expr)
        return a
    if t is Call:
        if expr.fn in synth_sigs:
            arg_types, ret = synth_sigs[expr.fn]
        elif expr.fn in theory:
            arg_types, ret = theory[expr.fn].arg_types, theory[expr.fn].ret
        else:
            raise TypeCheckError(f"unknown function {expr.fn}", expr)
        if len(arg_types) != len(expr.args):
            raise TypeCheckError(
                f"{expr.fn} expects {len(arg_types)} arguments, got {len(expr.args)}", expr)
        got = [typecheck(a, env, theory, synth_sigs, holes) for a in expr.args]
        if any(a is ANY for a in arg_types):
            if len(set(got)) != 1:
                raise TypeCheckError(f"{expr.fn} arguments disagree in type", expr)
        else:
            for i, (want, have) in enumerate(zip(arg_types, got)):
                if want is not have:
                    raise TypeCheckError(
                        f"argument {i + 1} of {expr.fn} has type {have}, expected {want}", expr)
        return ret
    raise TypeCheckError(f"not an expression: {expr!r}")


def check_fndef(fd: FnDef, theory: Theory, synth_sigs: Mapping[str, tuple]) -> None:
    env = dict(fd.params)
    extra = free_vars(fd.body) - set(env)
    if extra:
        raise TypeCheckError(f"{fd.name}: free variables {sorted(extra)} not among parameters")
    got = typecheck(fd.body, env, theory, synth_sigs)
    if got is not fd.ret:
        raise TypeCheckError(f"{fd.name}: body has type {got}, declared {fd.ret}")


def signature(params: Sequence, ret: Type) -> tuple:
    return tuple(t for _, t in params), ret
