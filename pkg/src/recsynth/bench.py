"""Benchmark files: parsing into synthesis instances and printing back.

Top-level forms, in any order::

    (benchmark NAME)
    (expect solvable)                         ; or unsolvable
    (options :cex-int-bound 4 :cex-list-len 4 :cex-samples 200 :budget 100000)
    (size-bound 3)
    (grammar (I :int x (head L)) (L :int-list nil xs (cons I L)) ...)
    (synth-fun f ((x :int) (xs :int-list)) :int-list
       :measure (len xs)
       :sketch ((if ?h1 ?h2 (f ?h3 ?h4)))     ; one or more bodies
       :holes ((?h1 B) (?h2 L C) ...))        ; each hole names its non-terminals
    (property (forall ((x :int)) (exists ((y :int :sketch (...) :holes (...))) M)))
    (test (= (f 3 (list 1 2)) (list 1 2 3)))

In expressions, integers, ``nil``, ``true`` and ``false`` are constants,
``?name`` is a hole, ``(list a b ...)`` abbreviates a ``cons`` chain and
every other symbol is a variable.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from .cgen import CgenConfig
from .grammar import App, Grammar, Terminal
from .lang import (
    BoolConst, Call, Hole, If, IntConst, LangError, NilConst, Type, Var,
    hole_ids, standard_theory, to_sexpr,
)
from .sexpr import Num, ParseError, SList, Sym, pos_of, read_all
from .sketch import HoleDecl, MultiSketch, SketchBody, SynthFun
from .spec import EXISTS, FORALL, Property, QVar, SynthesisInstance, Witness

THEORY = standard_theory()

# option keyword -> CgenConfig field
OPTION_FIELDS = {
    ":cex-int-bound": "int_bound",
    ":cex-list-len": "list_len",
    ":cex-samples": "samples",
    ":budget": "budget",
    ":max-exhaustive": "max_exhaustive",
}


class BenchError(Exception):
    pass


@dataclass
class BenchmarkFile:
    name: str
    instance: SynthesisInstance
    expect_solvable: Optional[bool] = None
    options: dict = field(default_factory=dict)  # keyword -> int

    def config(self, base: CgenConfig = CgenConfig(), **overrides) -> CgenConfig:
        """``base`` with this file's options applied, then ``overrides``
        (None values ignored)."""
        vals = {OPTION_FIELDS[k]: v for k, v in self.options.items() if k in OPTION_FIELDS}
        vals.update({k: v for k, v in overrides.items() if v is not None})
        return dataclasses.replace(base, **vals)


def _err(msg, node=None):
    return ParseError(msg, pos_of(node))


def _sym(x, what="symbol"):
    if not isinstance(x, Sym):
        raise _err(f"expected {what}", x)
    return str(x)


def _list(x, what="list"):
    if not isinstance(x, SList):
        raise _err(f"expected {what}", x)
    return x


def _type(x) -> Type:
    try:
        return Type.parse(_sym(x, "type"))
    except ValueError as e:
        raise _err(str(e), x) from None


def _keywords(items, allowed) -> dict:
    if len(items) % 2:
        raise _err("keyword without value", items[-1] if items else None)
    out = {}
    for k, v in zip(items[::2], items[1::2]):
        k = _sym(k, "keyword")
        if k not in allowed:
            raise _err(f"unknown keyword {k}", v)
        if k in out:
            raise _err(f"duplicate keyword {k}", v)
        out[k] = v
    return out


def parse_expr(x, holes_ok: bool = False):
    if isinstance(x, Num):
        return IntConst(int(x))
    if isinstance(x, Sym):
        s = str(x)
        if s == "nil":
            return NilConst()
        if s in ("true", "false"):
            return BoolConst(s == "true")
        if s.startswith("?"):
            if not holes_ok:
                raise _err(f"hole {s} outside a sketch", x)
            if len(s) == 1:
                raise _err("empty hole name", x)
            return Hole(s[1:])
        if s.startswith(":"):
            raise _err(f"unexpected keyword {s}", x)
        return Var(s)
    x = _list(x, "expression")
    if not x:
        raise _err("empty application", x)
    head = _sym(x[0], "function symbol")
    args = [parse_expr(a, holes_ok) for a in x[1:]]
    if head == "if":
        if len(args) != 3:
            raise _err("if takes three arguments", x)
        return If(*args)
    if head == "list":
        out = NilConst()
        for a in reversed(args):
            out = Call("cons", (a, out))
        return out
    return Call(head, tuple(args))


def _params(x):
    out = []
    for p in _list(x, "parameter list"):
        p = _list(p, "(name :type)")
        if len(p) != 2:
            raise _err("parameter must be (name :type)", p)
        out.append((_sym(p[0], "parameter name"), _type(p[1])))
    return tuple(out)


def _sketch(owner, sketch_x, holes_x):
    bodies_x = _list(sketch_x, "list of sketch bodies")
    if not bodies_x:
        raise _err("empty :sketch", sketch_x)
    decls = {}
    order = []
    for h in _list(holes_x, "hole declarations"):
        h = _list(h, "(?hole NT ...)")
        if len(h) < 2:
            raise _err("hole declaration needs a non-terminal", h)
        hid = _sym(h[0], "hole")
        if not hid.startswith("?"):
            raise _err("hole names start with ?", h[0])
        if hid[1:] in decls:
            raise _err(f"hole {hid} declared twice", h)
        decls[hid[1:]] = HoleDecl(hid[1:], tuple(_sym(n, "non-terminal") for n in h[1:]))
        order.append(hid[1:])
    bodies = []
    used = set()
    for bx in bodies_x:
        skel = parse_expr(bx, holes_ok=True)
        refs = hole_ids(skel)
        missing = [h for h in refs if h not in decls]
        if missing:
            raise _err(f"undeclared hole(s) {', '.join('?' + h for h in missing)}", bx)
        bodies.append(SketchBody(owner, skel, [decls[h] for h in order if h in refs]))
        used |= set(refs)
    unused = [h for h in order if h not in used]
    if unused:
        raise _err(f"hole(s) {', '.join('?' + h for h in unused)} do not occur in any body", holes_x)
    return MultiSketch(owner, bodies)


def _synth_fun(x):
    if len(x) < 4:
        raise _err("synth-fun needs a name, parameters and a return type", x)
    name = _sym(x[1], "function name")
    params = _params(x[2])
    ret = _type(x[3])
    kw = _keywords(x[4:], {":measure", ":sketch", ":holes"})
    if ":sketch" not in kw or ":holes" not in kw:
        raise _err(f"synth-fun {name} needs :sketch and :holes", x)
    measure = parse_expr(kw[":measure"]) if ":measure" in kw else None
    return SynthFun(name, params, ret, _sketch(name, kw[":sketch"], kw[":holes"]), measure)


def _property(x):
    if len(x) != 2:
        raise _err("property takes one formula", x)
    prefix = []
    f = x[1]
    while isinstance(f, SList) and f and isinstance(f[0], Sym) and f[0] in (FORALL, EXISTS):
        if len(f) != 3:
            raise _err(f"{f[0]} takes a variable list and a body", f)
        quant = str(f[0])
        for v in _list(f[1], "quantified variables"):
            v = _list(v, "(name :type ...)")
            if len(v) < 2:
                raise _err("quantified variable must be (name :type ...)", v)
            name, typ = _sym(v[0], "variable"), _type(v[1])
            witness = None
            if quant == EXISTS:
                kw = _keywords(v[2:], {":sketch", ":holes", ":measure"})
                if ":sketch" not in kw or ":holes" not in kw:
                    raise _err(f"existential variable {name} needs :sketch and :holes", v)
                measure = parse_expr(kw[":measure"]) if ":measure" in kw else None
                witness = Witness(_sketch(name, kw[":sketch"], kw[":holes"]), measure)
            elif len(v) != 2:
                raise _err("universal variables take no annotations", v)
            prefix.append(QVar(quant, name, typ, witness))
        f = f[2]
    return Property(tuple(prefix), parse_expr(f))


def _grammar(x):
    nts = {}
    rules = []
    for nx in x[1:]:
        nx = _list(nx, "(NT :type alternatives...)")
        if len(nx) < 2:
            raise _err("non-terminal needs a type", nx)
        n = _sym(nx[0], "non-terminal")
        if n in nts:
            raise _err(f"non-terminal {n} declared twice", nx)
        nts[n] = _type(nx[1])
        for alt in nx[2:]:
            if isinstance(alt, SList):
                if not alt:
                    raise _err("empty rule", alt)
                rules.append(App(n, _sym(alt[0], "function symbol"),
                                 tuple(_sym(a, "non-terminal") for a in alt[1:])))
            else:
                atom = parse_expr(alt)
                rules.append(Terminal(n, atom))
    return Grammar(nts, rules)


def _int_arg(x, what):
    if len(x) != 2 or not isinstance(x[1], Num):
        raise _err(f"{what} takes one integer", x)
    return int(x[1])


def parse_benchmark(text: str, name: str = "", validate: bool = True) -> BenchmarkFile:
    """Parse and validate a benchmark; raises :class:`ParseError` or
    :class:`BenchError` with a location or reason."""
    forms = read_all(text)
    if not forms:
        raise ParseError("empty benchmark file")
    grammar = None
    functions, properties, tests = [], [], []
    size_bound = None
    expect = None
    options = {}
    for f in forms:
        f = _list(f, "top-level form")
        if not f:
            raise _err("empty form", f)
        head = _sym(f[0], "form name")
        if head == "benchmark":
            if len(f) != 2:
                raise _err("benchmark takes one name", f)
            name = str(f[1])
        elif head == "expect":
            if len(f) != 2 or f[1] not in ("solvable", "unsolvable"):
                raise _err("expect takes solvable or unsolvable", f)
            expect = f[1] == "solvable"
        elif head == "options":
            for k, v in _keywords(f[1:], set(OPTION_FIELDS)).items():
                if not isinstance(v, Num):
                    raise _err(f"option {k} takes an integer", v)
                options[k] = int(v)
        elif head == "size-bound":
            size_bound = _int_arg(f, "size-bound")
        elif head == "grammar":
            if grammar is not None:
                raise _err("only one grammar per benchmark", f)
            grammar = _grammar(f)
        elif head == "synth-fun":
            functions.append(_synth_fun(f))
        elif head == "property":
            properties.append(_property(f))
        elif head == "test":
            if len(f) != 2:
                raise _err("test takes one sentence", f)
            tests.append(parse_expr(f[1]))
        else:
            raise _err(f"unknown form {head}", f)
    if grammar is None:
        raise ParseError("missing grammar")
    if not functions:
        raise ParseError("no synth-fun")
    if size_bound is None:
        raise ParseError("missing size-bound")
    inst = SynthesisInstance(THEORY, grammar, functions, properties, tests, size_bound)
    if validate:
        errors = instance_errors(inst)
        if errors:
            raise BenchError("; ".join(errors))
    return BenchmarkFile(name, inst, expect, options)


def instance_errors(inst: SynthesisInstance) -> list:
    from .skolem import SkolemError, reduce_instance
    errors = inst.validate()
    if errors:
        return errors
    try:
        reduced = reduce_instance(inst)
    except (SkolemError, LangError) as e:
        return [str(e)]
    return reduced.validate() if reduced is not inst else []


def load_benchmark(path) -> BenchmarkFile:
    path = Path(path)
    stem = path.name.split(".")[0]
    return parse_benchmark(path.read_text(), stem)


# -- printing -----------------------------------------------------------------------


def _params_str(params):
    return "(" + " ".join(f"({p} {t})" for p, t in params) + ")"


def _sketch_str(ms: MultiSketch):
    bodies = " ".join(to_sexpr(b.skeleton) for b in ms.bodies)
    holes = " ".join("(?" + h.id + " " + " ".join(h.nts) + ")"
                     for b in ms.bodies for h in b.holes)
    return f":sketch ({bodies}) :holes ({holes})"


def _property_str(p: Property):
    out = to_sexpr(p.matrix)
    groups = []
    for q in p.prefix:
        if groups and groups[-1][0] == q.quant:
            groups[-1][1].append(q)
        else:
            groups.append((q.quant, [q]))
    for quant, qs in reversed(groups):
        vs = []
        for q in qs:
            extra = ""
            if q.witness is not None:
                extra = " " + _sketch_str(q.witness.sketch)
                if q.witness.measure is not None:
                    extra += f" :measure {to_sexpr(q.witness.measure)}"
            vs.append(f"({q.name} {q.type}{extra})")
        out = f"({quant} ({' '.join(vs)}) {out})"
    return f"(property {out})"


def print_benchmark(bf: BenchmarkFile) -> str:
    inst = bf.instance
    lines = []
    if bf.name:
        lines.append(f"(benchmark {bf.name})")
    if bf.expect_solvable is not None:
        lines.append(f"(expect {'solvable' if bf.expect_solvable else 'unsolvable'})")
    if bf.options:
        lines.append("(options " + " ".join(f"{k} {v}" for k, v in bf.options.items()) + ")")
    lines.append(f"(size-bound {inst.size_bound})")
    g = inst.grammar
    nts = []
    for n, t in g.nts.items():
        alts = []
        for r in g.rules_for(n):
            alts.append(to_sexpr(r.atom) if isinstance(r, Terminal)
                        else "(" + " ".join((r.fn,) + r.rhs) + ")")
        nts.append(f"  ({n} {t}" + "".join(" " + a for a in alts) + ")")
    lines.append("(grammar\n" + "\n".join(nts) + ")")
    for f in inst.functions:
        m = f" :measure {to_sexpr(f.measure)}" if f.measure is not None else ""
        lines.append(f"(synth-fun {f.name} {_params_str(f.params)} {f.ret}{m}\n  {_sketch_str(f.sketch)})")
    lines += [_property_str(p) for p in inst.properties]
    lines += [f"(test {to_sexpr(t)})" for t in inst.tests]
    return "\n".join(lines) + "\n"


def builtin_dir() -> Path:
    return Path(__file__).with_name("benchmarks")


def builtin_benchmarks() -> list:
    return sorted(builtin_dir().glob("*.bench"))
