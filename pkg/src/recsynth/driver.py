"""The synthesis loop: enumerate a candidate, search for a counterexample,
learn a blocking clause, repeat."""

from __future__ import annotations

import time
from dataclasses import asdict, dataclass, field
from typing import Optional

from .cgen import Checker, CgenConfig, Counterexample, measure_errors
from .constrain import ConstraintStore, generalize
from .enumeration import NOGEN, VARIANTS, CandidateSpace
from .grammar import size
from .lang import LangError
from .skolem import reduce_instance
from .spec import SynthesisInstance

SOLUTION = "solution"
EXHAUSTED = "exhausted"
TIMED_OUT = "timeout"


class InstanceError(LangError):
    pass


@dataclass
class RunStats:
    benchmark: str = ""
    variant: str = ""
    seed: int = 0
    seconds: float = 0.0
    candidates: int = 0  # submitted to counterexample search
    concepts: int = 0
    materialized: int = 0
    clauses: int = 0
    full_rejections: int = 0
    partial_backtracks: int = 0
    outcome: str = ""
    solution_size: Optional[int] = None

    def as_dict(self) -> dict:
        return asdict(self)


@dataclass
class Learned:
    """A clause together with the counterexample and candidate it came from."""

    clause: object
    cex: Counterexample
    candidate: object


@dataclass
class SynthResult:
    status: str
    defs: dict = field(default_factory=dict)  # name -> FnDef, solution only
    candidate: object = None
    stats: RunStats = field(default_factory=RunStats)
    learned: list = field(default_factory=list)  # Learned, when recorded
    history: list = field(default_factory=list)  # (choices, emergents) per candidate, when logged

    @property
    def solved(self) -> bool:
        return self.status == SOLUTION

    def emergent_size(self) -> Optional[int]:
        if self.candidate is None:
            return None
        return sum(size(c) for em in self.candidate.emergents for _, c in em)

    def program_text(self) -> str:
        return "\n".join(self.defs[n].to_sexpr() for n in self.defs)


def synth(inst: SynthesisInstance, variant: str = "proph", cfg: CgenConfig = CgenConfig(),
          timeout: Optional[float] = None, record: bool = False,
          name: str = "", log_candidates: bool = False) -> SynthResult:
    """Run the loop on a universal instance. ``timeout`` is in seconds and is
    checked between iterations; ``record`` keeps every learned clause with
    its counterexample; ``log_candidates`` keeps the sequence of candidates
    submitted to counterexample search."""
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant}")
    if not inst.universal:
        raise InstanceError("synth needs a universal instance; use solve")
    errors = inst.validate() + measure_errors(inst, cfg)
    if errors:
        raise InstanceError("; ".join(errors))
    start = time.monotonic()
    deadline = None if timeout is None else start + timeout
    stats = RunStats(benchmark=name, variant=variant, seed=cfg.seed)
    store = None if variant == NOGEN else ConstraintStore()
    space = CandidateSpace(inst.functions, inst.grammar, inst.size_bound, variant, store)
    if store is not None:
        store.bind(space.concepts.index)
    checker = Checker(inst, cfg)
    learned = []
    history = []
    result = None

    def finish(status, cand=None):
        stats.seconds = time.monotonic() - start
        stats.concepts = len(space.concepts)
        c = space.counters
        stats.materialized = c.materialized
        stats.full_rejections = c.full_rejections
        stats.partial_backtracks = c.partial_backtracks
        stats.clauses = len(store) if store is not None else 0
        stats.outcome = status
        res = SynthResult(status, dict(cand.defs) if cand is not None else {}, cand, stats,
                          learned, history)
        stats.solution_size = res.emergent_size()
        return res

    while result is None:
        if deadline is not None and time.monotonic() >= deadline:
            result = finish(TIMED_OUT)
            break
        cand = space.next()
        if cand is None:
            result = finish(EXHAUSTED)
            break
        stats.candidates += 1
        if log_candidates:
            history.append((cand.choices, cand.emergents))
        cex = checker.find(cand)
        if cex is None:
            # guard against a lucky sample: re-check with a fresh seed
            cex = checker.find(cand, seed=cfg.seed + 1)
            if cex is None:
                result = finish(SOLUTION, cand)
                break
        if store is None:
            continue
        for clause in generalize(cex, cand):
            if store.add(clause) and record:
                learned.append(Learned(clause, cex, cand))
    return result


def solve(inst: SynthesisInstance, variant: str = "proph", cfg: CgenConfig = CgenConfig(),
          timeout: Optional[float] = None, record: bool = False, name: str = "",
          log_candidates: bool = False) -> SynthResult:
    """Reduce existential properties to witness functions, then synthesize
    all functions together."""
    errors = inst.validate()
    if errors:
        raise InstanceError("; ".join(errors))
    return synth(reduce_instance(inst), variant, cfg, timeout, record, name, log_candidates)
