"""Recursive-descent parser for the textual formula syntax.

Grammar (loosest first)::

    formula := disj (CMP disj)?          CMP is one of = != <= !<=
    disj    := conj ('|' conj)*
    conj    := unary ('&' unary)*
    unary   := ('exists' | 'forall') var (',' var)* '.' disj
             | '(' formula ')'
             | '~'? NAME '(' vars? ')'
             | var ('=' | '!=') var

A quantifier body is a disjunction, so ``forall x. P(x) = forall x. Q(x)``
compares two universally quantified formulas.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .syntax import (
    And,
    Atom,
    BuiltinAtom,
    Compare,
    Exists,
    Forall,
    Formula,
    FormulaError,
    Or,
    VarEq,
    Vocabulary,
    check_vocabulary,
)


class ParseError(FormulaError):
    def __init__(self, message: str, pos: int, text: str = ""):
        line = text.count("\n", 0, pos) + 1
        col = pos - (text.rfind("\n", 0, pos) + 1) + 1
        super().__init__(f"{message} at line {line}, column {col}")
        self.pos = pos
        self.line = line
        self.column = col


_TOKEN_RE = re.compile(
    r"\s*(?:(?P<op>!<=|!=|<=|=|&|\||~|\(|\)|,|\.)|(?P<name>[A-Za-z_][A-Za-z0-9_']*))"
)
_KEYWORDS = {"exists", "forall"}


@dataclass
class _Tok:
    kind: str  # 'op', 'name', 'eof'
    value: str
    pos: int


def _tokenize(text: str) -> list[_Tok]:
    toks = []
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN_RE.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}", pos, text)
        kind = "op" if m.group("op") else "name"
        value = m.group(kind)
        toks.append(_Tok(kind, value, m.start(kind)))
        pos = m.end()
    toks.append(_Tok("eof", "", len(text)))
    return toks


class _Parser:
    def __init__(self, text: str, vocab: Vocabulary):
        self.text = text
        self.vocab = vocab
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self, k: int = 0) -> _Tok:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def next(self) -> _Tok:
        t = self.peek()
        self.i += 1
        return t

    def error(self, msg: str, tok: _Tok | None = None):
        tok = tok or self.peek()
        return ParseError(msg, tok.pos, self.text)

    def expect(self, value: str) -> _Tok:
        t = self.next()
        if t.value != value or t.kind == "eof":
            got = "end of input" if t.kind == "eof" else repr(t.value)
            raise self.error(f"expected {value!r}, got {got}", t)
        return t

    def name(self) -> str:
        t = self.next()
        if t.kind != "name" or t.value in _KEYWORDS:
            raise self.error("expected a name", t)
        return t.value

    def parse(self) -> Formula:
        phi = self.formula()
        if self.peek().kind != "eof":
            raise self.error(f"unexpected {self.peek().value!r}")
        return phi

    def formula(self) -> Formula:
        left = self.disj()
        t = self.peek()
        if t.kind == "op" and t.value in ("=", "!=", "<=", "!<="):
            self.next()
            right = self.disj()
            nxt = self.peek()
            if nxt.kind == "op" and nxt.value in ("=", "!=", "<=", "!<="):
                raise self.error("comparisons do not chain; add parentheses", nxt)
            return Compare(t.value, left, right)
        return left

    def disj(self) -> Formula:
        left = self.conj()
        while self.peek().value == "|" and self.peek().kind == "op":
            self.next()
            left = Or(left, self.conj())
        return left

    def conj(self) -> Formula:
        left = self.unary()
        while self.peek().value == "&" and self.peek().kind == "op":
            self.next()
            left = And(left, self.unary())
        return left

    def unary(self) -> Formula:
        t = self.peek()
        if t.kind == "name" and t.value in _KEYWORDS:
            self.next()
            vars_ = [self.name()]
            while self.peek().value == ",":
                self.next()
                vars_.append(self.name())
            self.expect(".")
            body = self.disj()
            cls = Exists if t.value == "exists" else Forall
            for v in reversed(vars_):
                body = cls(v, body)
            return body
        if t.kind == "op" and t.value == "(":
            self.next()
            inner = self.formula()
            self.expect(")")
            return inner
        negated = False
        if t.kind == "op" and t.value == "~":
            self.next()
            negated = True
        t = self.peek()
        if t.kind != "name" or t.value in _KEYWORDS:
            got = "end of input" if t.kind == "eof" else repr(t.value)
            raise self.error(f"expected an atom, got {got}", t)
        if self.peek(1).value == "(" and self.peek(1).kind == "op":
            return self.atom(negated)
        if negated:
            raise self.error("'~' applies only to relation atoms", t)
        left = self.name()
        op = self.next()
        if op.value not in ("=", "!="):
            raise self.error("expected '(' or a variable comparison", op)
        right = self.name()
        return VarEq(left, right, op.value == "!=")

    def atom(self, negated: bool) -> Formula:
        tok = self.peek()
        sym = self.name()
        self.expect("(")
        args = []
        if self.peek().value != ")":
            args.append(self.name())
            while self.peek().value == ",":
                self.next()
                args.append(self.name())
        self.expect(")")
        if self.vocab.is_relation(sym):
            node = Atom(sym, tuple(args), negated)
        elif self.vocab.is_builtin(sym):
            node = BuiltinAtom(sym, tuple(args), negated)
        else:
            raise ParseError(f"unknown symbol {sym}", tok.pos, self.text)
        ar = self.vocab.arity(sym)
        if ar != len(args):
            raise ParseError(
                f"{sym} has arity {ar} but got {len(args)} arguments", tok.pos, self.text
            )
        return node


def parse_formula(text: str, vocab: Vocabulary) -> Formula:
    phi = _Parser(text, vocab).parse()
    check_vocabulary(phi, vocab)
    return phi
