"""Sketch bodies with typed holes, multi-sketches, emergents and completion."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Optional

from .grammar import Grammar, generates
from .lang import (
    Call, Expr, FnDef, Hole, If, LangError, Theory, Type, TypeCheckError,
    called_fns, hole_ids, tag, to_sexpr, typecheck, Var,
)


class SketchError(LangError):
    pass


@dataclass(frozen=True)
class HoleDecl:
    id: str
    nts: tuple  # non-terminal names; any of them may fill the hole


@dataclass
class SketchBody:
    owner: str
    skeleton: Expr
    holes: list  # HoleDecl in document order

    @property
    def hole_ids(self) -> list:
        return [h.id for h in self.holes]


@dataclass
class MultiSketch:
    owner: str
    bodies: list  # SketchBody


@dataclass
class SynthFun:
    """A function under synthesis: signature, multi-sketch and measure."""

    name: str
    params: tuple  # ((name, Type), ...)
    ret: Type
    sketch: MultiSketch
    measure: Optional[Expr] = None

    @property
    def param_names(self) -> tuple:
        return tuple(p for p, _ in self.params)

    @property
    def sig(self) -> tuple:
        return tuple(t for _, t in self.params), self.ret

    def is_recursive(self) -> bool:
        return any(self.name in called_fns(b.skeleton) for b in self.sketch.bodies)


# An emergent is an association list ((hole-id, concept), ...) in hole order.
Emergent = tuple


@dataclass(frozen=True)
class Candidate:
    """One completion per function: chosen body index, emergent and the
    resulting tagged definitions."""

    choices: tuple  # body index per function, in function order
    emergents: tuple  # Emergent per function
    defs: Mapping[str, FnDef] = field(compare=False)

    @property
    def assignment(self) -> dict:
        """hole-id -> concept across all functions."""
        return {h: c for em in self.emergents for h, c in em}


def _fill(e: Expr, fills: Mapping[str, Expr]) -> Expr:
    t = type(e)
    if t is Hole:
        return tag(fills[e.id], e.id)
    if t is If:
        return If(_fill(e.cond, fills), _fill(e.then, fills), _fill(e.else_, fills), e.prov)
    if t is Call:
        return Call(e.fn, tuple(_fill(a, fills) for a in e.args), e.prov)
    return e


def complete(fun: SynthFun, body: SketchBody, emergent: Emergent,
             theory: Optional[Theory] = None, synth_sigs: Mapping[str, tuple] = None) -> FnDef:
    """Substitute the emergent into the body. Every substituted node carries
    its hole id as provenance. Typechecks the result when a theory is given."""
    fills = dict(emergent)
    want = set(body.hole_ids)
    missing = want - set(fills)
    extra = set(fills) - want
    if missing:
        raise SketchError(f"{fun.name}: no concept for hole(s) {', '.join(sorted(missing))}")
    if extra:
        raise SketchError(f"{fun.name}: unknown hole(s) {', '.join(sorted(extra))}")
    fd = FnDef(fun.name, fun.params, fun.ret, _fill(body.skeleton, fills), fun.measure)
    if theory is not None:
        sigs = dict(synth_sigs or {})
        sigs.setdefault(fun.name, fun.sig)
        try:
            got = typecheck(fd.body, dict(fun.params), theory, sigs)
        except TypeCheckError as e:
            raise SketchError(f"{fun.name}: completion does not typecheck: {e}") from None
        if got is not fun.ret:
            raise SketchError(f"{fun.name}: completion has type {got}, expected {fun.ret}")
    return fd


def untag(e: Expr) -> Expr:
    t = type(e)
    if t is If:
        return If(untag(e.cond), untag(e.then), untag(e.else_))
    if t is Call:
        return Call(e.fn, tuple(untag(a) for a in e.args))
    if e.prov is None:
        return e
    return type(e)(*[getattr(e, f) for f in e.__dataclass_fields__ if f != "prov"])


def decompile(fd: FnDef, body: SketchBody) -> Emergent:
    """Recover the emergent of a completed definition from its provenance."""
    found = {}

    def visit(e):
        if e.prov is not None:
            found.setdefault(e.prov, untag(e))
            return
        for c in (e.cond, e.then, e.else_) if type(e) is If else \
                (e.args if type(e) is Call else ()):
            visit(c)

    visit(fd.body)
    return tuple((h, found[h]) for h in body.hole_ids)


def hole_type(grammar: Grammar, decl: HoleDecl):
    types = {grammar.nts.get(n) for n in decl.nts}
    return types.pop() if len(types) == 1 else None


def validate_multisketch(fun: SynthFun, grammar: Grammar, theory: Theory,
                         synth_sigs: Mapping[str, tuple] = None) -> list:
    """Located errors for the sketch bodies of ``fun``."""
    errors = []
    sigs = dict(synth_sigs or {})
    sigs.setdefault(fun.name, fun.sig)
    params = dict(fun.params)
    if not fun.sketch.bodies:
        errors.append(f"{fun.name}: multi-sketch has no bodies")
    for bi, body in enumerate(fun.sketch.bodies):
        where = f"{fun.name} body {bi + 1}"
        refs = hole_ids(body.skeleton)
        dup = sorted({h for h in refs if refs.count(h) > 1})
        if dup:
            errors.append(f"{where}: hole(s) {', '.join(dup)} occur more than once")
        declared = [h.id for h in body.holes]
        if sorted(set(refs)) != sorted(declared):
            errors.append(f"{where}: holes {sorted(set(refs))} do not match declarations {sorted(declared)}")
            continue
        htypes = {}
        for decl in body.holes:
            if not decl.nts:
                errors.append(f"{where}: hole {decl.id} has no non-terminal")
                continue
            unknown = [n for n in decl.nts if n not in grammar.nts]
            if unknown:
                errors.append(f"{where}: hole {decl.id} uses undeclared non-terminal(s) {', '.join(unknown)}")
                continue
            ht = hole_type(grammar, decl)
            if ht is None:
                errors.append(f"{where}: non-terminals of hole {decl.id} disagree in type")
                continue
            htypes[decl.id] = ht
            for n in grammar.reachable(decl.nts):
                for r in grammar.rules_for(n):
                    atom = getattr(r, "atom", None)
                    if type(atom) is Var and atom.name not in params:
                        errors.append(
                            f"{where}: hole {decl.id} can generate variable {atom.name}, "
                            f"which is not a parameter of {fun.name}")
        if len(htypes) != len(body.holes):
            continue
        try:
            got = typecheck(body.skeleton, params, theory, sigs, htypes)
        except TypeCheckError as e:
            errors.append(f"{where}: {e}")
            continue
        if got is not fun.ret:
            errors.append(f"{where}: skeleton has type {got}, expected {fun.ret}")
    return sorted(set(errors), key=errors.index)


def concept_fits(grammar: Grammar, decl: HoleDecl, concept: Expr) -> bool:
    return any(generates(grammar, n, concept) for n in decl.nts)


def emergent_str(em: Emergent) -> str:
    return ", ".join(f"{h}={to_sexpr(c)}" for h, c in em)
