"""Sketch-based synthesis of recursive programs from first-order
properties, with witness functions for existential quantifiers."""

from .bench import load_benchmark, parse_benchmark, print_benchmark
from .cgen import CgenConfig, find_cex
from .driver import SynthResult, solve, synth
from .skolem import reduce_instance, skolemize

__all__ = [
    "CgenConfig", "SynthResult", "find_cex", "load_benchmark", "parse_benchmark",
    "print_benchmark", "reduce_instance", "skolemize", "solve", "synth",
]
