"""Evaluation of object-language programs.

Two evaluators share one semantics:

* :class:`Tracer` is the reference interpreter. It records which holes are
  entered, enforces input contracts and self-recursion measure decrease, and
  reports the provenance of every violation.
* :class:`Compiler` turns definitions into Python closures for fast
  screening. It reports nothing but "fine" or "something went wrong"; every
  failure is re-run through the tracer, so the tracer alone decides outcomes.

Steps are counted per AST node entered. Frame depth is capped as well; both
limits surface as ``BUDGET``.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass
from typing import Mapping, Optional

from .lang import (
    BoolConst, Call, Expr, FnDef, If, IntConst, NilConst, Theory, Value, Var,
    free_vars,
)

OK = "ok"
CONTRACT = "contract"
MEASURE = "measure"
BUDGET = "budget"

DEFAULT_BUDGET = 100_000
DEFAULT_MAX_DEPTH = 400

# Short-circuit connectives: value of the first operand that forces
# evaluation of the second.
LAZY_CONTINUE = {"and": True, "or": False, "=>": True}

if sys.getrecursionlimit() < 20_000:
    sys.setrecursionlimit(20_000)


@dataclass(frozen=True)
class EvalOutcome:
    kind: str
    value: Optional[Value] = None
    trace: frozenset = frozenset()
    steps: int = 0
    # contract: holes of the violating call; measure: holes of the recursive
    # arguments the measure reads
    site_holes: frozenset = frozenset()
    guard_holes: frozenset = frozenset()
    frame: Optional[tuple] = None  # (fn, args) of the violating frame
    site: Optional[tuple] = None  # child-index path from the body root

    @property
    def holes(self) -> frozenset:
        return self.site_holes | self.guard_holes

    @property
    def ok(self) -> bool:
        return self.kind == OK


class _Stop(Exception):
    def __init__(self, kind, site_holes=frozenset(), guard_holes=frozenset(),
                 frame=None, site=None):
        self.kind = kind
        self.site_holes = site_holes
        self.guard_holes = guard_holes
        self.frame = frame
        self.site = site


class MeasureError(Exception):
    """A measure expression misbehaved on its own (it must be total)."""


class _Frame:
    __slots__ = ("fn", "args", "env", "guards", "path")

    def __init__(self, fn, args, env):
        self.fn = fn
        self.args = args
        self.env = env
        self.guards = []  # trace slices of enclosing conditions
        self.path = []


def measure_positions(fd: FnDef) -> tuple:
    """Parameter positions the measure of ``fd`` reads."""
    if fd.measure is None:
        return ()
    used = free_vars(fd.measure)
    return tuple(i for i, p in enumerate(fd.param_names) if p in used)


def eval_pure(e: Expr, env: Mapping[str, Value], theory: Theory) -> Value:
    """Evaluate a measure expression (background functions only)."""
    t = type(e)
    if t is Var:
        return env[e.name]
    if t is IntConst or t is BoolConst:
        return e.value
    if t is NilConst:
        return ()
    if t is If:
        return eval_pure(e.then if eval_pure(e.cond, env, theory) else e.else_, env, theory)
    bg = theory[e.fn]
    vals = [eval_pure(a, env, theory) for a in e.args]
    if bg.contract is not None and not bg.contract(*vals):
        raise MeasureError(f"contract of {e.fn} violated inside a measure")
    return bg.impl(*vals)


class Tracer:
    """Reference interpreter with hole tracing and violation provenance."""

    def __init__(self, defs: Mapping[str, FnDef], theory: Theory,
                 budget: int = DEFAULT_BUDGET, max_depth: int = DEFAULT_MAX_DEPTH):
        self.defs = defs
        self.theory = theory
        self.budget = budget
        self.max_depth = max_depth
        self._mpos = {name: measure_positions(fd) for name, fd in defs.items()}
        self.reset()

    def reset(self):
        self.trace = []
        self.steps = 0
        self.depth = 0

    # -- entry points --

    def run_call(self, fn: str, args: tuple) -> EvalOutcome:
        self.reset()
        try:
            v = self._call(fn, tuple(args))
        except _Stop as s:
            return self._stopped(s)
        return EvalOutcome(OK, v, frozenset(self.trace), self.steps)

    def run_expr(self, e: Expr, env: Mapping[str, Value]) -> EvalOutcome:
        """Evaluate a closed-over expression outside any definition (a
        property matrix or test). A contract violation here has ``frame``
        None."""
        self.reset()
        try:
            v = self._ev(e, _Frame(None, None, dict(env)))
        except _Stop as s:
            return self._stopped(s)
        return EvalOutcome(OK, v, frozenset(self.trace), self.steps)

    def _stopped(self, s: _Stop) -> EvalOutcome:
        return EvalOutcome(s.kind, None, frozenset(self.trace), self.steps,
                           frozenset(s.site_holes), frozenset(s.guard_holes), s.frame, s.site)

    # -- core --

    def measure(self, fn: str, args: tuple) -> Value:
        fd = self.defs[fn]
        return eval_pure(fd.measure, dict(zip(fd.param_names, args)), self.theory)

    def _guard_holes(self, fr: _Frame) -> frozenset:
        tr = self.trace
        return frozenset(h for s, e in fr.guards for h in tr[s:e])

    def _call(self, fn: str, args: tuple) -> Value:
        if self.depth >= self.max_depth:
            raise _Stop(BUDGET)
        fd = self.defs[fn]
        fr = _Frame(fn, args, dict(zip(fd.param_names, args)))
        self.depth += 1
        v = self._ev(fd.body, fr)
        self.depth -= 1
        return v

    def _ev(self, e: Expr, fr: _Frame) -> Value:
        self.steps += 1
        if self.steps > self.budget:
            raise _Stop(BUDGET)
        h = e.prov
        if h is not None:
            self.trace.append(h)
        t = type(e)
        if t is Var:
            return fr.env[e.name]
        if t is IntConst or t is BoolConst:
            return e.value
        if t is NilConst:
            return ()
        path = fr.path
        tr = self.trace
        if t is If:
            path.append(0)
            s = len(tr)
            c = self._ev(e.cond, fr)
            path.pop()
            fr.guards.append((s, len(tr)))
            if c:
                path.append(1)
                v = self._ev(e.then, fr)
            else:
                path.append(2)
                v = self._ev(e.else_, fr)
            path.pop()
            fr.guards.pop()
            return v
        fn = e.fn
        start = len(tr) - (h is not None)
        if fn not in self.defs:
            bg = self.theory[fn]
            if bg.lazy:
                path.append(0)
                s = len(tr)
                a = self._ev(e.args[0], fr)
                path.pop()
                if a != LAZY_CONTINUE[fn]:
                    return fn != "and"
                fr.guards.append((s, len(tr)))
                path.append(1)
                b = self._ev(e.args[1], fr)
                path.pop()
                fr.guards.pop()
                return b
        vals = []
        slices = []
        for i, a in enumerate(e.args):
            path.append(i)
            s = len(tr)
            vals.append(self._ev(a, fr))
            slices.append((s, len(tr)))
            path.pop()
        if fn in self.defs:
            vals = tuple(vals)
            if fn == fr.fn and self.defs[fn].measure is not None:
                new = self.measure(fn, vals)
                cur = self.measure(fn, fr.args)
                if not (0 <= new < cur):
                    site = frozenset(x for i in self._mpos[fn]
                                     for x in tr[slices[i][0]:slices[i][1]])
                    raise _Stop(MEASURE, site, self._guard_holes(fr),
                                (fr.fn, fr.args), tuple(path))
            return self._call(fn, vals)
        if bg.contract is not None and not bg.contract(*vals):
            raise _Stop(CONTRACT, frozenset(tr[start:]), self._guard_holes(fr),
                        (fr.fn, fr.args) if fr.fn is not None else None, tuple(path))
        return bg.impl(*vals)

    # -- obligations --

    def obligation_violated(self, fn: str, args: tuple, site: tuple, kind: str) -> bool:
        """Check the contract or measure obligation of the call at ``site``
        in ``fn`` on inputs ``args``: true iff the guards on the path to the
        site hold and the call's contract (or the measure decrease) fails.

        Only the guards and the site itself are evaluated, so two programs
        that agree there agree on the answer.
        """
        self.reset()
        fd = self.defs[fn]
        fr = _Frame(fn, tuple(args), dict(zip(fd.param_names, args)))
        self.depth = 1
        node = fd.body
        try:
            for idx in site:
                t = type(node)
                if t is If:
                    if idx != 0:
                        c = self._ev(node.cond, fr)
                        if bool(c) != (idx == 1):
                            return False
                    node = (node.cond, node.then, node.else_)[idx]
                elif t is Call:
                    bg = self.theory.get(node.fn)
                    if bg is not None and bg.lazy and idx == 1:
                        if self._ev(node.args[0], fr) != LAZY_CONTINUE[node.fn]:
                            return False
                    node = node.args[idx]
                else:
                    return False
            if type(node) is not Call:
                return False
            if kind == CONTRACT:
                bg = self.theory.get(node.fn)
                if bg is None or bg.contract is None:
                    return False
                vals = [self._ev(a, fr) for a in node.args]
                return not bg.contract(*vals)
            if kind == MEASURE:
                if node.fn != fn or fd.measure is None:
                    return False
                pos = set(self._mpos[fn])
                vals = tuple(self._ev(a, fr) if i in pos else None
                             for i, a in enumerate(node.args))
                new = self.measure(fn, vals)
                cur = self.measure(fn, fr.args)
                return not (0 <= new < cur)
        except _Stop:
            return False
        return False


# -- closure compilation --------------------------------------------------------


class FastFail(Exception):
    pass


class Compiler:
    """Compiles expressions to closures ``f(env, ctx)``.

    ``env`` is a tuple of values indexed by variable position and ``ctx`` is
    ``[steps, depth, fns, budget, max_depth]`` where ``fns`` maps defined
    function names to ``(body, measure)`` closures. Closures of identical
    subtrees are memoized, so hole concepts are compiled once per run.
    """

    def __init__(self, theory: Theory, defined: set):
        self.theory = theory
        self.defined = set(defined)
        self._memo = {}

    def compile(self, e: Expr, variables: tuple, owner: Optional[str] = None):
        vi = {v: i for i, v in enumerate(variables)}
        return self._comp(e, vi, tuple(variables), owner)

    def compile_measure(self, fd: FnDef):
        if fd.measure is None:
            return None
        f = self.compile(fd.measure, fd.param_names)

        def measure(env):
            return f(env, [0, 0, None, 1 << 62, 0])
        return measure

    def _comp(self, e, vi, vkey, owner):
        # Only hole-derived subtrees recur across candidates; skeleton nodes
        # are rebuilt so the memo stays proportional to the concept count.
        if e.prov is None:
            return self._build(e, vi, vkey, owner)
        key = (e, vkey)
        hit = self._memo.get(key)
        if hit is None:
            hit = self._memo[key] = self._build(e, vi, vkey, owner)
        return hit

    def _build(self, e, vi, vkey, owner):
        t = type(e)
        if t is Var:
            i = vi[e.name]

            def var(env, ctx):
                ctx[0] += 1
                return env[i]
            return var
        if t in (IntConst, BoolConst, NilConst):
            v = () if t is NilConst else e.value

            def const(env, ctx):
                ctx[0] += 1
                return v
            return const
        if t is If:
            fc = self._comp(e.cond, vi, vkey, owner)
            ft = self._comp(e.then, vi, vkey, owner)
            fe = self._comp(e.else_, vi, vkey, owner)

            def if_(env, ctx):
                ctx[0] += 1
                return ft(env, ctx) if fc(env, ctx) else fe(env, ctx)
            return if_
        fs = [self._comp(a, vi, vkey, owner) for a in e.args]
        name = e.fn
        if name in self.defined:
            return self._defined_call(name, fs, owner)
        bg = self.theory[name]
        impl, contract = bg.impl, bg.contract
        if bg.lazy:
            fa, fb = fs
            if name == "and":
                def and_(env, ctx):
                    ctx[0] += 1
                    return fa(env, ctx) and fb(env, ctx)
                return and_
            if name == "or":
                def or_(env, ctx):
                    ctx[0] += 1
                    return fa(env, ctx) or fb(env, ctx)
                return or_

            def implies(env, ctx):
                ctx[0] += 1
                return (not fa(env, ctx)) or fb(env, ctx)
            return implies
        if len(fs) == 1:
            fa, = fs
            if contract is None:
                def call1(env, ctx):
                    ctx[0] += 1
                    return impl(fa(env, ctx))
                return call1

            def call1c(env, ctx):
                ctx[0] += 1
                a = fa(env, ctx)
                if not contract(a):
                    raise FastFail
                return impl(a)
            return call1c
        if len(fs) == 2:
            fa, fb = fs
            if contract is None:
                def call2(env, ctx):
                    ctx[0] += 1
                    return impl(fa(env, ctx), fb(env, ctx))
                return call2

            def call2c(env, ctx):
                ctx[0] += 1
                a = fa(env, ctx)
                b = fb(env, ctx)
                if not contract(a, b):
                    raise FastFail
                return impl(a, b)
            return call2c

        def calln(env, ctx):
            ctx[0] += 1
            vals = [f(env, ctx) for f in fs]
            if contract is not None and not contract(*vals):
                raise FastFail
            return impl(*vals)
        return calln

    def _defined_call(self, name, fs, owner):
        self_rec = name == owner

        def call(env, ctx):
            ctx[0] += 1
            args = tuple([f(env, ctx) for f in fs])
            body, measure = ctx[2][name]
            if self_rec and measure is not None:
                new = measure(args)
                if not (0 <= new < measure(env)):
                    raise FastFail
            if ctx[0] > ctx[3] or ctx[1] >= ctx[4]:
                raise FastFail
            ctx[1] += 1
            v = body(args, ctx)
            ctx[1] -= 1
            return v
        return call


class FastProgram:
    """Compiled set of definitions for screening inputs quickly."""

    def __init__(self, compiler: Compiler, defs: Mapping[str, FnDef],
                 budget: int = DEFAULT_BUDGET, max_depth: int = DEFAULT_MAX_DEPTH):
        self.budget = budget
        self.max_depth = max_depth
        self.compiler = compiler
        self.fns = {
            name: (compiler.compile(fd.body, fd.param_names, name), compiler.compile_measure(fd))
            for name, fd in defs.items()
        }

    def call_ok(self, fn: str, args: tuple):
        """Return ``(True, value)`` if the call certainly succeeds, else
        ``(False, None)``."""
        ctx = [0, 1, self.fns, self.budget, self.max_depth]
        try:
            v = self.fns[fn][0](args, ctx)
        except FastFail:
            return False, None
        if ctx[0] > self.budget:
            return False, None
        return True, v

    def eval(self, f, env: tuple):
        """Run a closure from :meth:`Compiler.compile` (compiled with no
        owner) against these definitions; ``(ok, value)`` as in
        :meth:`call_ok`."""
        ctx = [0, 0, self.fns, self.budget, self.max_depth]
        try:
            v = f(env, ctx)
        except FastFail:
            return False, None
        if ctx[0] > self.budget:
            return False, None
        return True, v
