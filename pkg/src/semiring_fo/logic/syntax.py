"""Abstract syntax of first-order logic with formula comparisons and built-ins."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Union

COMPARISON_OPS = ("=", "!=", "<=", "!<=")


class FormulaError(Exception):
    pass


@dataclass(frozen=True)
class Vocabulary:
    """Input relations (tau) and built-in symbols (sigma), each with an arity."""

    relations: tuple[tuple[str, int], ...] = ()
    builtins: tuple[tuple[str, int], ...] = ()

    def __post_init__(self):
        names = [n for n, _ in self.relations] + [n for n, _ in self.builtins]
        if len(set(names)) != len(names):
            raise FormulaError("relation and built-in names must be unique")
        for name, ar in self.relations + self.builtins:
            if ar < 0:
                raise FormulaError(f"negative arity for {name}")
        for name, ar in self.builtins:
            if ar == 0:
                raise FormulaError(f"nullary built-in {name} is not allowed")

    @classmethod
    def of(cls, relations=None, builtins=None) -> "Vocabulary":
        rel = tuple((dict(relations) if relations else {}).items())
        bi = tuple((dict(builtins) if builtins else {}).items())
        return cls(rel, bi)

    def arity(self, name: str) -> int:
        for n, ar in self.relations + self.builtins:
            if n == name:
                return ar
        raise FormulaError(f"unknown symbol {name}")

    def is_relation(self, name: str) -> bool:
        return any(n == name for n, _ in self.relations)

    def is_builtin(self, name: str) -> bool:
        return any(n == name for n, _ in self.builtins)

    def extend(self, builtins) -> "Vocabulary":
        extra = tuple(b for b in dict(builtins).items() if not self.is_builtin(b[0]))
        return Vocabulary(self.relations, self.builtins + extra)


@dataclass(frozen=True)
class VarEq:
    left: str
    right: str
    negated: bool = False


@dataclass(frozen=True)
class Atom:
    symbol: str
    args: tuple[str, ...]
    negated: bool = False


@dataclass(frozen=True)
class BuiltinAtom:
    symbol: str
    args: tuple[str, ...]
    negated: bool = False


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Compare:
    op: str
    left: "Formula"
    right: "Formula"

    def __post_init__(self):
        if self.op not in COMPARISON_OPS:
            raise FormulaError(f"unknown comparison {self.op!r}")


@dataclass(frozen=True)
class Exists:
    var: str
    body: "Formula"


@dataclass(frozen=True)
class Forall:
    var: str
    body: "Formula"


Formula = Union[VarEq, Atom, BuiltinAtom, And, Or, Compare, Exists, Forall]
LITERALS = (VarEq, Atom, BuiltinAtom)
BINARY = (And, Or, Compare)
QUANTIFIERS = (Exists, Forall)


def VarNeq(x: str, y: str) -> VarEq:
    return VarEq(x, y, True)


def NegAtom(symbol: str, args) -> Atom:
    return Atom(symbol, tuple(args), True)


def NegBuiltinAtom(symbol: str, args) -> BuiltinAtom:
    return BuiltinAtom(symbol, tuple(args), True)


def conj(*parts: Formula) -> Formula:
    out = parts[0]
    for p in parts[1:]:
        out = And(out, p)
    return out


def disj(*parts: Formula) -> Formula:
    out = parts[0]
    for p in parts[1:]:
        out = Or(out, p)
    return out


def exists(vars_, body: Formula) -> Formula:
    for v in reversed(list(vars_)):
        body = Exists(v, body)
    return body


def forall(vars_, body: Formula) -> Formula:
    for v in reversed(list(vars_)):
        body = Forall(v, body)
    return body


# ---------------------------------------------------------------------------
# Traversals


def subformulas(phi: Formula) -> Iterator[Formula]:
    stack = [phi]
    while stack:
        f = stack.pop()
        yield f
        if isinstance(f, BINARY):
            stack.append(f.right)
            stack.append(f.left)
        elif isinstance(f, QUANTIFIERS):
            stack.append(f.body)


def free_vars(phi: Formula) -> frozenset[str]:
    if isinstance(phi, VarEq):
        return frozenset((phi.left, phi.right))
    if isinstance(phi, (Atom, BuiltinAtom)):
        return frozenset(phi.args)
    if isinstance(phi, BINARY):
        return free_vars(phi.left) | free_vars(phi.right)
    return free_vars(phi.body) - {phi.var}


def is_sentence(phi: Formula) -> bool:
    return not free_vars(phi)


def count(phi: Formula, kind) -> int:
    return sum(1 for f in subformulas(phi) if isinstance(f, kind))


def size(phi: Formula) -> int:
    return sum(1 for _ in subformulas(phi))


def depth(phi: Formula) -> int:
    if isinstance(phi, LITERALS):
        return 0
    if isinstance(phi, BINARY):
        return 1 + max(depth(phi.left), depth(phi.right))
    return 1 + depth(phi.body)


def has_comparison(phi: Formula) -> bool:
    return any(isinstance(f, Compare) for f in subformulas(phi))


def uses_builtins(phi: Formula) -> bool:
    return any(isinstance(f, BuiltinAtom) for f in subformulas(phi))


def check_vocabulary(phi: Formula, vocab: Vocabulary) -> None:
    """Raise FormulaError on unknown symbols or arity mismatches."""
    for f in subformulas(phi):
        if isinstance(f, Atom):
            if not vocab.is_relation(f.symbol):
                raise FormulaError(f"unknown relation {f.symbol}")
        elif isinstance(f, BuiltinAtom):
            if not vocab.is_builtin(f.symbol):
                raise FormulaError(f"unknown built-in {f.symbol}")
        else:
            continue
        ar = vocab.arity(f.symbol)
        if ar != len(f.args):
            raise FormulaError(f"{f.symbol} has arity {ar}, used with {len(f.args)} arguments")


def strict_violations(phi: Formula) -> list[str]:
    """Places where the formula leaves the alpha-compare-alpha grammar."""
    out = []
    for f in subformulas(phi):
        if isinstance(f, Compare):
            for side in (f.left, f.right):
                if has_comparison(side):
                    out.append(f"nested comparison under {to_text(f)}")
                    break
    return out


# ---------------------------------------------------------------------------
# Printing (round-trips through the parser)


def to_text(phi: Formula) -> str:
    if isinstance(phi, VarEq):
        return f"{phi.left} {'!=' if phi.negated else '='} {phi.right}"
    if isinstance(phi, (Atom, BuiltinAtom)):
        return f"{'~' if phi.negated else ''}{phi.symbol}({','.join(phi.args)})"
    if isinstance(phi, BINARY):
        op = {And: "&", Or: "|"}.get(type(phi)) or phi.op
        return f"({_operand(phi.left)} {op} {_operand(phi.right)})"
    q = "exists" if isinstance(phi, Exists) else "forall"
    return f"{q} {phi.var}. {to_text(phi.body)}"


def _operand(phi: Formula) -> str:
    text = to_text(phi)
    if isinstance(phi, QUANTIFIERS) or isinstance(phi, VarEq):
        return f"({text})"
    return text
