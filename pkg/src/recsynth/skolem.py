"""Reduction of mixed-quantifier properties to universal ones whose
existential variables become witness functions under synthesis."""

from __future__ import annotations

from dataclasses import dataclass, replace

from .lang import Call, Expr, If, IntConst, LangError, Var
from .sketch import MultiSketch, SketchBody, SynthFun
from .spec import EXISTS, FORALL, Property, SynthesisInstance


class SkolemError(LangError):
    pass


@dataclass
class SkolemOutput:
    property: Property
    fresh: list  # SynthFun, prefix order


def _rename_calls(e: Expr, old: str, new: str) -> Expr:
    t = type(e)
    if t is If:
        return If(_rename_calls(e.cond, old, new), _rename_calls(e.then, old, new),
                  _rename_calls(e.else_, old, new), e.prov)
    if t is Call:
        return Call(new if e.fn == old else e.fn,
                    tuple(_rename_calls(a, old, new) for a in e.args), e.prov)
    return e


def _replace_var(e: Expr, name: str, by: Expr) -> Expr:
    t = type(e)
    if t is Var:
        return by if e.name == name else e
    if t is If:
        return If(_replace_var(e.cond, name, by), _replace_var(e.then, name, by),
                  _replace_var(e.else_, name, by), e.prov)
    if t is Call:
        return Call(e.fn, tuple(_replace_var(a, name, by) for a in e.args), e.prov)
    return e


def fresh_name(base: str, taken) -> str:
    if base not in taken:
        return base
    k = 1
    while f"{base}_{k}" in taken:
        k += 1
    return f"{base}_{k}"


def skolemize(p: Property, taken=()) -> SkolemOutput:
    """Replace every existential variable by a call of a fresh witness
    function on the universals before it. ``taken`` holds symbols the fresh
    names must avoid."""
    taken = set(taken)
    universals = []
    fresh = []
    matrix = p.matrix
    for q in p.prefix:
        if q.quant == FORALL:
            universals.append(q)
            continue
        if q.quant != EXISTS:
            raise SkolemError(f"unknown quantifier {q.quant}")
        if q.witness is None:
            raise SkolemError(f"existential variable {q.name} lacks a :sketch annotation")
        name = fresh_name(q.name, taken)
        taken.add(name)
        params = tuple((u.name, u.type) for u in universals)
        bodies = [SketchBody(name, _rename_calls(b.skeleton, q.name, name), list(b.holes))
                  for b in q.witness.sketch.bodies]
        fun = SynthFun(name, params, q.type, MultiSketch(name, bodies), q.witness.measure)
        if fun.measure is None:
            if fun.is_recursive():
                raise SkolemError(f"recursive witness sketch for {q.name} needs a :measure")
            fun.measure = IntConst(0)
        fresh.append(fun)
        matrix = _replace_var(matrix, q.name, Call(name, tuple(Var(u.name) for u in universals)))
    return SkolemOutput(Property(tuple(universals), matrix), fresh)


def reduce_instance(inst: SynthesisInstance) -> SynthesisInstance:
    """Skolemize every mixed property; witness functions are appended after
    the original functions in property order."""
    if inst.universal:
        return inst
    taken = set(inst.theory) | {f.name for f in inst.functions}
    props = []
    fresh = []
    for p in inst.properties:
        if p.universal:
            props.append(p)
            continue
        out = skolemize(p, taken)
        taken |= {f.name for f in out.fresh}
        props.append(out.property)
        fresh += out.fresh
    return replace(inst, functions=list(inst.functions) + fresh, properties=props)


def witness_functions(original: SynthesisInstance, reduced: SynthesisInstance) -> list:
    known = {f.name for f in original.functions}
    return [f.name for f in reduced.functions if f.name not in known]

