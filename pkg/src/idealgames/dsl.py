"""Recursive-descent parser for the textual set/sequence/transform DSL.

Grammar (LL(1), ASCII):

    set   := 'finite' '{' ints? '}' | 'ap' '(' int ',' int ')'
           | 'tail' '(' int ')' | 'isch' '(' name selector? ')'
           | 'union' '(' set ',' set ')' | 'inter' '(' set ',' set ')'
           | 'compl' '(' set ')'
    selector := ',' ('all' | 'even' | '{' ints '}')
    seq   := 'alt' '(' num ',' num ')' | 'inv' | 'ratenum'
           | 'ratenum-signed' | 'piecewise' '(' set ',' rule ',' rule ')'
           | 'const' '(' num ')'
    rule  := 'n' | 'inv' | 'altsign' | num
    sigma := 'set' '(' set ')' | 'stem' '[' ints ']'
    perm  := 'perm-stem' '[' ints ']'

Numbers are integers, decimals, or fractions 'p/q'; decimals parse exactly.
"""
from __future__ import annotations

import re
from fractions import Fraction

from . import seqspace as sq
from . import setexpr as sx
from .errors import DslParseError

_TOKEN = re.compile(
    r"\s*(?:(?P<num>-?\d+(?:\.\d+)?(?:/\d+)?)|(?P<name>[A-Za-z][A-Za-z0-9_-]*)"
    r"|(?P<sym>[(){}\[\],]))"
)


class _Lexer:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.tokens: list[tuple[str, str, int]] = []
        while self.pos < len(text):
            if text[self.pos].isspace():
                self.pos += 1
                continue
            m = _TOKEN.match(text, self.pos)
            if m is None or m.end() == self.pos:
                self._fail("unexpected character", self.pos)
            for kind in ("num", "name", "sym"):
                if m.group(kind):
                    self.tokens.append((kind, m.group(kind), m.start(kind)))
                    break
            self.pos = m.end()
        self.i = 0

    def _fail(self, msg: str, at: int):
        line = self.text.count("\n", 0, at) + 1
        col = at - (self.text.rfind("\n", 0, at) + 1) + 1
        raise DslParseError(msg, line, col)

    def peek(self) -> tuple[str, str, int] | None:
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def next(self, kind: str | None = None, value: str | None = None):
        tok = self.peek()
        if tok is None:
            self._fail("unexpected end of input", len(self.text))
        if kind and tok[0] != kind:
            self._fail(f"expected {kind}, found {tok[1]!r}", tok[2])
        if value and tok[1] != value:
            self._fail(f"expected {value!r}, found {tok[1]!r}", tok[2])
        self.i += 1
        return tok

    def done(self):
        tok = self.peek()
        if tok is not None:
            self._fail(f"trailing input {tok[1]!r}", tok[2])


def _num(text: str) -> int | Fraction:
    if "/" in text:
        p, q = text.split("/")
        return Fraction(int(p), int(q))
    if "." in text:
        return Fraction(text)
    return int(text)


def _int_list(lx: _Lexer, open_sym: str, close_sym: str) -> tuple[int, ...]:
    lx.next("sym", open_sym)
    vals: list[int] = []
    tok = lx.peek()
    if tok and tok[1] == close_sym:
        lx.next()
        return ()
    while True:
        vals.append(int(lx.next("num")[1]))
        tok = lx.next("sym")
        if tok[1] == close_sym:
            return tuple(vals)
        if tok[1] != ",":
            lx._fail("expected ',' or closer", tok[2])


def _parse_set(lx: _Lexer) -> sx.SetExpr:
    kind, name, at = lx.next("name")
    if name == "finite":
        return sx.Finite(_int_list(lx, "{", "}"))
    if name == "ap":
        lx.next("sym", "(")
        a = int(lx.next("num")[1])
        lx.next("sym", ",")
        d = int(lx.next("num")[1])
        lx.next("sym", ")")
        return sx.ArithProg(a, d)
    if name == "tail":
        lx.next("sym", "(")
        k = int(lx.next("num")[1])
        lx.next("sym", ")")
        return sx.Tail(k)
    if name == "isch":
        lx.next("sym", "(")
        gen = sx.generator(lx.next("name")[1])
        tok = lx.peek()
        selector: sx.SetExpr = sx.Tail(1)
        if tok and tok[1] == ",":
            lx.next()
            tok = lx.peek()
            if tok and tok[1] == "{":
                selector = sx.Finite(_int_list(lx, "{", "}"))
            else:
                word = lx.next("name")[1]
                if word == "all":
                    selector = sx.Tail(1)
                elif word == "even":
                    selector = sx.ArithProg(2, 2)
                else:
                    lx._fail(f"unknown selector {word!r}", tok[2])
        lx.next("sym", ")")
        return sx.IntervalSchedule(gen, selector)
    if name in ("union", "inter"):
        lx.next("sym", "(")
        left = _parse_set(lx)
        lx.next("sym", ",")
        right = _parse_set(lx)
        lx.next("sym", ")")
        return sx.Union(left, right) if name == "union" else sx.Inter(left, right)
    if name == "compl":
        lx.next("sym", "(")
        inner = _parse_set(lx)
        lx.next("sym", ")")
        return sx.Compl(inner)
    lx._fail(f"unknown set constructor {name!r}", at)


def _parse_rule(lx: _Lexer) -> sq.TermRule:
    tok = lx.peek()
    if tok and tok[0] == "num":
        lx.next()
        return sq.TermRule("const", _num(tok[1]))
    kind, name, at = lx.next("name")
    if name == "n":
        return sq.RULE_IDENT
    if name == "inv":
        return sq.RULE_INV
    if name == "altsign":
        return sq.RULE_ALTSIGN
    lx._fail(f"unknown term rule {name!r}", at)


def _parse_seq(lx: _Lexer) -> sq.SeqDescriptor:
    kind, name, at = lx.next("name")
    if name == "alt":
        lx.next("sym", "(")
        v0 = _num(lx.next("num")[1])
        lx.next("sym", ",")
        v1 = _num(lx.next("num")[1])
        lx.next("sym", ")")
        return sq.AlternatingPair(v0, v1)
    if name == "inv":
        return sq.ExplicitTail((), sq.RULE_INV)
    if name == "ratenum":
        return sq.RationalEnum()
    if name == "ratenum-signed":
        return sq.SignedRationalEnum()
    if name == "const":
        lx.next("sym", "(")
        v = _num(lx.next("num")[1])
        lx.next("sym", ")")
        return sq.ExplicitTail((), sq.TermRule("const", v))
    if name == "piecewise":
        lx.next("sym", "(")
        s = _parse_set(lx)
        lx.next("sym", ",")
        on_rule = _parse_rule(lx)
        lx.next("sym", ",")
        off_rule = _parse_rule(lx)
        lx.next("sym", ")")
        return sq.PiecewiseOnSet(s, on_rule, off_rule)
    lx._fail(f"unknown sequence {name!r}", at)


def _parse_transform(lx: _Lexer) -> sq.Subseq | sq.Perm:
    kind, name, at = lx.next("name")
    if name == "set":
        lx.next("sym", "(")
        s = _parse_set(lx)
        lx.next("sym", ")")
        return sq.Subseq.from_set(s)
    if name == "stem":
        return sq.Subseq(_int_list(lx, "[", "]"))
    if name == "perm-stem":
        return sq.Perm(_int_list(lx, "[", "]"))
    lx._fail(f"unknown transform {name!r}", at)


def parse_set(text: str) -> sx.SetExpr:
    lx = _Lexer(text)
    out = _parse_set(lx)
    lx.done()
    return out


def parse_seq(text: str) -> sq.SeqDescriptor:
    lx = _Lexer(text)
    out = _parse_seq(lx)
    lx.done()
    return out


def parse_transform(text: str) -> sq.Subseq | sq.Perm:
    lx = _Lexer(text)
    out = _parse_transform(lx)
    lx.done()
    return out
