"""Testing-based counterexample generation.

A candidate is checked in two phases. First every function under synthesis
is called directly on its own input domain (admissibility). Then properties
(on bounded-exhaustive and random assignments) and tests are checked, those
mentioning fewer functions under synthesis first. The first violation wins.
Passes are cached per definitions involved. Inputs are screened with compiled
closures; anything suspicious is re-run through the tracing interpreter,
which alone decides the outcome and its provenance.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product
from typing import Iterator, Optional

from .lang import Type, called_fns, show_value
from .machine import (
    BUDGET, CONTRACT, DEFAULT_BUDGET, DEFAULT_MAX_DEPTH, MEASURE, OK, Compiler,
    EvalOutcome, FastProgram, MeasureError, Tracer, eval_pure,
)
from .spec import SynthesisInstance

PROPERTY = "property"
TEST = "test"
KINDS = (CONTRACT, MEASURE, PROPERTY, TEST, BUDGET)


@dataclass(frozen=True)
class CgenConfig:
    int_bound: int = 4  # exhaustive ints in [-b, b]
    list_len: int = 4  # exhaustive lists up to this length
    samples: int = 200  # random assignments per property
    seed: int = 0
    budget: int = DEFAULT_BUDGET  # evaluation steps per call
    max_exhaustive: int = 2000  # cap on the joint exhaustive assignments
    max_depth: int = DEFAULT_MAX_DEPTH


@dataclass(frozen=True)
class Counterexample:
    kind: str
    assignment: dict = field(hash=False)
    holes: frozenset = frozenset()
    origin: tuple = ()  # ("function", name) | ("property", i) | ("test", i)
    frame: Optional[tuple] = None  # (fn, args) for contract/measure
    site: Optional[tuple] = None
    trace: frozenset = frozenset()

    def __str__(self) -> str:
        binds = " ".join(f"({k} {show_value(v)})" for k, v in self.assignment.items())
        return f"{self.kind} {binds}".rstrip()


# -- input domains ---------------------------------------------------------------


def int_values(b: int) -> list:
    out = [0]
    for i in range(1, b + 1):
        out += [i, -i]
    return out


@lru_cache(maxsize=None)
def _exhaustive(t: Type, b: int, length: int) -> tuple:
    if t is Type.BOOL:
        return (False, True)
    ints = int_values(b)
    if t is Type.INT:
        return tuple(ints)
    out = []
    for n in range(length + 1):
        out.extend(product(ints, repeat=n))
    return tuple(out)


def exhaustive_values(t: Type, cfg: CgenConfig) -> tuple:
    """Smallest-first exhaustive prefix of the domain of ``t``."""
    return _exhaustive(t, cfg.int_bound, cfg.list_len)


def random_value(t: Type, rng: random.Random, cfg: CgenConfig):
    b = 2 * cfg.int_bound
    if t is Type.BOOL:
        return rng.random() < 0.5
    if t is Type.INT:
        return rng.randint(-b, b)
    return tuple(rng.randint(-b, b) for _ in range(rng.randint(0, 2 * cfg.list_len)))


def gen_values(t: Type, cfg: CgenConfig) -> Iterator:
    """Exhaustive prefix followed by an endless seeded random stream."""
    yield from exhaustive_values(t, cfg)
    rng = random.Random(f"{cfg.seed}/{t.value}")
    while True:
        yield random_value(t, rng, cfg)


def weight(v) -> int:
    if isinstance(v, bool):
        return int(v)
    if isinstance(v, int):
        return abs(v)
    return len(v) + sum(abs(x) for x in v)


def _compositions(total, caps):
    if not caps:
        if total == 0:
            yield ()
        return
    for w in range(min(total, caps[0]) + 1):
        for rest in _compositions(total - w, caps[1:]):
            yield (w,) + rest


@lru_cache(maxsize=256)
def _joint(types: tuple, b: int, length: int, cap: int) -> tuple:
    buckets = []
    for t in types:
        by_w = {}
        for v in _exhaustive(t, b, length):
            by_w.setdefault(weight(v), []).append(v)
        buckets.append(by_w)
    caps = [max(bw) for bw in buckets]
    out = []
    for total in range(sum(caps) + 1):
        for comp in _compositions(total, caps):
            lists = [bw.get(w, ()) for bw, w in zip(buckets, comp)]
            for tup in product(*lists):
                out.append(tup)
                if len(out) >= cap:
                    return tuple(out)
    return tuple(out)


def joint_exhaustive(types, cfg: CgenConfig) -> tuple:
    """Joint exhaustive assignments ordered by total weight, then by the
    per-variable weight split, then row-major; at most ``max_exhaustive``."""
    return _joint(tuple(types), cfg.int_bound, cfg.list_len, cfg.max_exhaustive)


def assignments(types, cfg: CgenConfig, salt: str, seed: Optional[int] = None) -> Iterator:
    yield from joint_exhaustive(types, cfg)
    if not types:
        return
    rng = random.Random(f"{cfg.seed if seed is None else seed}/{salt}")
    for _ in range(cfg.samples):
        yield tuple(random_value(t, rng, cfg) for t in types)


# -- checking ------------------------------------------------------------------------


class Checker:
    """Counterexample search for the candidates of one instance. Matrices
    and tests are compiled once; concepts are compiled once per run."""

    def __init__(self, inst: SynthesisInstance, cfg: CgenConfig = CgenConfig()):
        if not inst.universal:
            raise ValueError("counterexample search needs a universal instance")
        self.inst = inst
        self.cfg = cfg
        self.theory = inst.theory
        self.funcs = list(inst.functions)
        self.compiler = Compiler(inst.theory, {f.name for f in self.funcs})
        self.props = []
        for p in inst.properties:
            names = p.variables
            self.props.append((names, tuple(q.type for q in p.prefix),
                               self.compiler.compile(p.matrix, names), p))
        self.tests = [self.compiler.compile(t, ()) for t in inst.tests]
        self.evaluations = 0
        self.cache_hits = 0
        self.deps = self._dependencies()
        # properties and tests involving fewer functions under synthesis
        # run first; their counterexamples implicate fewer holes
        items = [("property", i, p.matrix) for i, p in enumerate(inst.properties)]
        items += [("test", i, t) for i, t in enumerate(inst.tests)]
        self.order = sorted(items, key=lambda it: len(self._deps_of(it[2])))
        self._passed = set()

    def _dependencies(self) -> dict:
        direct = {f.name: set().union(*(called_fns(b.skeleton) for b in f.sketch.bodies))
                  for f in self.funcs}
        out = {}
        for name in direct:
            seen, todo = set(), [name]
            while todo:
                g = todo.pop()
                if g in seen or g not in direct:
                    continue
                seen.add(g)
                todo.extend(direct[g])
            out[name] = tuple(sorted(seen))
        return out

    def _deps_of(self, e) -> tuple:
        names = set()
        for g in called_fns(e):
            names.update(self.deps.get(g, ()))
        return tuple(sorted(names))

    def _key(self, item, deps, defs, seed):
        return (item, seed, tuple(defs[g] for g in deps))

    def find(self, candidate, seed: Optional[int] = None) -> Optional[Counterexample]:
        cfg = self.cfg
        defs = candidate.defs
        fast = FastProgram(self.compiler, defs, cfg.budget, cfg.max_depth)
        tracer = Tracer(defs, self.theory, cfg.budget, cfg.max_depth)
        seed = cfg.seed if seed is None else seed
        passed = self._passed
        for f in self.funcs:
            key = self._key(("function", f.name), self.deps[f.name], defs, seed)
            if key in passed:
                self.cache_hits += 1
                continue
            types = tuple(t for _, t in f.params)
            for args in assignments(types, cfg, f"fn/{f.name}", seed):
                self.evaluations += 1
                ok, _ = fast.call_ok(f.name, args)
                if ok:
                    continue
                out = tracer.run_call(f.name, args)
                if out.kind != OK:
                    return self._cex(out, ("function", f.name), dict(zip(f.param_names, args)))
            passed.add(key)
        for kind, i, expr in self.order:
            key = self._key((kind, i), self._deps_of(expr), defs, seed)
            if key in passed:
                self.cache_hits += 1
                continue
            if kind == "property":
                names, types, fm, _ = self.props[i]
                envs = assignments(types, cfg, f"property/{i}", seed)
            else:
                names, fm, envs = (), self.tests[i], [()]
            for vals in envs:
                self.evaluations += 1
                ok, v = fast.eval(fm, vals)
                if ok and v:
                    continue
                env = dict(zip(names, vals))
                out = tracer.run_expr(expr, env)
                if out.kind == OK and out.value:
                    continue
                return self._cex(out, (kind, i), env)
            passed.add(key)
        return None

    def _cex(self, out: EvalOutcome, origin: tuple, env: dict) -> Counterexample:
        falsified = PROPERTY if origin[0] == "property" else TEST
        if out.kind == OK or (out.kind == CONTRACT and out.frame is None):
            return Counterexample(falsified, env, out.trace, origin, trace=out.trace)
        if out.kind == BUDGET:
            return Counterexample(BUDGET, env, out.trace, origin, trace=out.trace)
        fn, args = out.frame
        params = self.inst.function(fn).param_names
        return Counterexample(out.kind, dict(zip(params, args)), out.holes, origin,
                              out.frame, out.site, out.trace)


def find_cex(candidate, inst: SynthesisInstance, cfg: CgenConfig = CgenConfig()) -> Optional[Counterexample]:
    return Checker(inst, cfg).find(candidate)


def replay(cex: Counterexample, defs, inst: SynthesisInstance, cfg: CgenConfig = CgenConfig()) -> bool:
    """Whether ``defs`` reproduce the violation kind of ``cex`` on its
    assignment."""
    tracer = Tracer(defs, inst.theory, cfg.budget, cfg.max_depth)
    if cex.kind in (CONTRACT, MEASURE):
        fn, args = cex.frame
        return tracer.obligation_violated(fn, args, cex.site, cex.kind)
    kind, idx = cex.origin
    if kind == "function":
        f = inst.function(idx)
        out = tracer.run_call(f.name, tuple(cex.assignment[p] for p in f.param_names))
        return out.kind == cex.kind
    matrix = inst.properties[idx].matrix if kind == "property" else inst.tests[idx]
    out = tracer.run_expr(matrix, cex.assignment)
    if cex.kind == BUDGET:
        return out.kind == BUDGET
    return (out.kind == OK and out.value is False) or (out.kind == CONTRACT and out.frame is None)


def measure_errors(inst: SynthesisInstance, cfg: CgenConfig = CgenConfig()) -> list:
    """Measures must evaluate to integers without contract violations; this
    samples them over the exhaustive input domain."""
    errors = []
    for f in inst.functions:
        if f.measure is None:
            continue
        types = tuple(t for _, t in f.params)
        for args in joint_exhaustive(types, cfg):
            env = dict(zip(f.param_names, args))
            try:
                v = eval_pure(f.measure, env, inst.theory)
            except MeasureError as e:
                errors.append(f"measure of {f.name}: {e} on {args}")
                break
            if isinstance(v, bool) or not isinstance(v, int):
                errors.append(f"measure of {f.name} is not an integer on {args}")
                break
    return errors
