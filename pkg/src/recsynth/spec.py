"""Properties, tests, measures and synthesis instances; matrix evaluation."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Optional

from .grammar import Grammar, validate as validate_grammar
from .lang import (
    Expr, FnDef, Theory, Type, TypeCheckError, free_vars, to_sexpr, typecheck,
)
from .machine import DEFAULT_BUDGET, EvalOutcome, Tracer
from .sketch import MultiSketch, SynthFun, validate_multisketch

FORALL = "forall"
EXISTS = "exists"


@dataclass(frozen=True)
class Witness:
    """Multi-sketch annotation of an existential variable. The owner of the
    sketch bodies is the existential variable's name until Skolemization
    picks the witness function's name."""

    sketch: MultiSketch
    measure: Optional[Expr] = None


@dataclass(frozen=True)
class QVar:
    quant: str
    name: str
    type: Type
    witness: Optional[Witness] = None


@dataclass
class Property:
    prefix: tuple  # QVar, outermost first
    matrix: Expr

    @property
    def variables(self) -> tuple:
        return tuple(q.name for q in self.prefix)

    @property
    def env(self) -> dict:
        return {q.name: q.type for q in self.prefix}

    @property
    def universal(self) -> bool:
        return all(q.quant == FORALL for q in self.prefix)

    def __str__(self) -> str:
        return to_sexpr(self.matrix)


def test_property(sentence: Expr) -> Property:
    """A test is a property with an empty prefix."""
    return Property((), sentence)


@dataclass
class SynthesisInstance:
    theory: Theory
    grammar: Grammar
    functions: list  # SynthFun, declaration order
    properties: list = field(default_factory=list)
    tests: list = field(default_factory=list)  # closed Bool Exprs
    size_bound: int = 3

    @property
    def synth_sigs(self) -> dict:
        return {f.name: f.sig for f in self.functions}

    @property
    def universal(self) -> bool:
        return all(p.universal for p in self.properties)

    def function(self, name: str) -> SynthFun:
        for f in self.functions:
            if f.name == name:
                return f
        raise KeyError(name)

    def validate(self) -> list:
        """All well-formedness errors of the instance (empty if valid)."""
        errors = []
        names = [f.name for f in self.functions]
        for f in self.functions:
            if f.name in self.theory:
                errors.append(f"{f.name} is a background function and cannot be synthesized")
            if names.count(f.name) > 1:
                errors.append(f"{f.name} is declared twice")
        errors += validate_grammar(self.grammar, self.theory, names)
        sigs = self.synth_sigs
        seen_holes = {}
        for f in self.functions:
            errors += validate_multisketch(f, self.grammar, self.theory, sigs)
            for body in f.sketch.bodies:
                for h in body.holes:
                    if h.id in seen_holes and seen_holes[h.id] != (f.name, id(body)):
                        errors.append(f"hole {h.id} is declared more than once")
                    seen_holes[h.id] = (f.name, id(body))
            if f.measure is not None:
                try:
                    mt = typecheck(f.measure, dict(f.params), self.theory)
                    if mt is not Type.INT:
                        errors.append(f"measure of {f.name} has type {mt}, expected :int")
                except TypeCheckError as e:
                    errors.append(f"measure of {f.name}: {e}")
        for i, p in enumerate(self.properties):
            errors += [f"property {i + 1}: {e}" for e in property_errors(p, self.theory, sigs)]
        for i, t in enumerate(self.tests):
            try:
                if free_vars(t):
                    errors.append(f"test {i + 1}: free variables {sorted(free_vars(t))}")
                elif typecheck(t, {}, self.theory, sigs) is not Type.BOOL:
                    errors.append(f"test {i + 1}: not a boolean sentence")
            except TypeCheckError as e:
                errors.append(f"test {i + 1}: {e}")
        if self.size_bound < 1:
            errors.append("size bound must be positive")
        return errors


def property_errors(p: Property, theory: Theory, sigs: Mapping[str, tuple]) -> list:
    errors = []
    names = [q.name for q in p.prefix]
    if len(set(names)) != len(names):
        errors.append("quantified variables must be distinct")
    for q in p.prefix:
        if q.quant == EXISTS and q.witness is None:
            errors.append(f"existential variable {q.name} lacks a :sketch annotation")
    extra = free_vars(p.matrix) - set(names)
    if extra:
        errors.append(f"free variables {sorted(extra)} in matrix")
        return errors
    # existential variables are typed by the prefix until Skolemization
    try:
        t = typecheck(p.matrix, p.env, theory, sigs)
        if t is not Type.BOOL:
            errors.append(f"matrix has type {t}, expected :bool")
    except TypeCheckError as e:
        errors.append(str(e))
    return errors


def eval_matrix(prop: Property, assignment: Mapping, defs: Mapping[str, FnDef],
                theory: Theory, budget: int = DEFAULT_BUDGET) -> EvalOutcome:
    """Evaluate the matrix of a universal property (or a test) under an
    assignment. The trace is the union over every call to a function under
    synthesis that short-circuit evaluation reached."""
    missing = set(prop.variables) - set(assignment)
    if missing:
        raise ValueError(f"assignment misses {sorted(missing)}")
    return Tracer(defs, theory, budget).run_expr(prop.matrix, assignment)


def falsified(outcome: EvalOutcome) -> bool:
    """A matrix outcome that counts against the candidate: false, or a
    contract violation raised by the matrix itself."""
    if outcome.kind == "ok":
        return outcome.value is False
    return outcome.kind == "contract" and outcome.frame is None
