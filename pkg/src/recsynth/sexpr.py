"""A small s-expression reader that keeps source positions for errors."""

from __future__ import annotations

import re


class ParseError(Exception):
    def __init__(self, message: str, pos=None):
        where = f"{pos[0]}:{pos[1]}: " if pos else ""
        super().__init__(where + message)
        self.pos = pos


class Sym(str):
    pos = None


class Num(int):
    pos = None


class SList(list):
    pos = None


_TOKEN = re.compile(r"\s+|;[^\n]*|\(|\)|[^\s();]+")
_INT = re.compile(r"[+-]?\d+\Z")


def _located(cls, value, pos):
    obj = cls(value)
    obj.pos = pos
    return obj


def read_all(text: str) -> list:
    """All top-level forms of ``text``."""
    stack = [SList()]
    line, col = 1, 1
    for m in _TOKEN.finditer(text):
        tok = m.group()
        pos = (line, col)
        nl = tok.count("\n")
        if nl:
            line += nl
            col = len(tok) - tok.rfind("\n")
        else:
            col += len(tok)
        if tok[0].isspace() or tok[0] == ";":
            continue
        if tok == "(":
            stack.append(_located(SList, (), pos))
        elif tok == ")":
            if len(stack) == 1:
                raise ParseError("unbalanced ')'", pos)
            done = stack.pop()
            stack[-1].append(done)
        elif _INT.match(tok):
            stack[-1].append(_located(Num, int(tok), pos))
        else:
            stack[-1].append(_located(Sym, tok, pos))
    if len(stack) > 1:
        raise ParseError("unbalanced '('", stack[-1].pos)
    return list(stack[0])


def pos_of(x):
    return getattr(x, "pos", None)
