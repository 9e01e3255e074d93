"""K-interpretations of input relations and built-in function families."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, Mapping, Optional

from ..semiring import BOOLEAN, Semiring
from .syntax import FormulaError, Vocabulary


class InterpretationError(Exception):
    pass


LiteralKey = tuple[bool, str, tuple]  # (negated, relation, tuple of elements)


class Interpretation:
    """A total map from literals over (universe, tau) to one semiring.

    The universe is an ordered sequence of distinct names; list order is the
    strict order used by the ranking function (first element has rank 1).
    """

    def __init__(self, spec: Semiring, universe: Iterable, vocab: Vocabulary,
                 values: Mapping[LiteralKey, Any]):
        self.spec = spec
        self.universe = tuple(universe)
        if len(set(self.universe)) != len(self.universe):
            raise InterpretationError("universe elements must be distinct")
        self.vocab = vocab
        self._rank = {a: i + 1 for i, a in enumerate(self.universe)}
        table = {}
        for neg, rel, args in self.literals():
            key = (neg, rel, args)
            if key not in values:
                sign = "~" if neg else ""
                raise InterpretationError(
                    f"missing value for literal {sign}{rel}({','.join(map(str, args))})"
                )
            table[key] = spec.check(values[key])
        extra = set(values) - set(table)
        if extra:
            neg, rel, args = sorted(extra, key=repr)[0]
            raise InterpretationError(f"literal {rel}{args} is outside the universe or vocabulary")
        self._values = table

    @classmethod
    def from_function(cls, spec: Semiring, universe: Iterable, vocab: Vocabulary,
                      fn: Callable[[bool, str, tuple], Any]) -> "Interpretation":
        universe = tuple(universe)
        values = {}
        for rel, ar in vocab.relations:
            for args in itertools.product(universe, repeat=ar):
                for neg in (False, True):
                    values[(neg, rel, args)] = fn(neg, rel, args)
        return cls(spec, universe, vocab, values)

    def literals(self) -> Iterable[LiteralKey]:
        for rel, ar in self.vocab.relations:
            for neg in (False, True):
                for args in itertools.product(self.universe, repeat=ar):
                    yield (neg, rel, args)

    def value(self, rel: str, args: tuple, negated: bool = False):
        try:
            return self._values[(negated, rel, tuple(args))]
        except KeyError:
            raise InterpretationError(f"no literal {rel}{tuple(args)}") from None

    def rank(self, a) -> int:
        return self._rank[a]

    def items(self):
        return self._values.items()

    def map_values(self, spec: Semiring, fn: Callable[[Any], Any]) -> "Interpretation":
        return Interpretation(spec, self.universe, self.vocab,
                              {k: fn(v) for k, v in self._values.items()})

    def __eq__(self, other):
        return (isinstance(other, Interpretation) and self.spec is other.spec
                and self.universe == other.universe and self.vocab == other.vocab
                and self._values == other._values)

    def __repr__(self):
        return (f"Interpretation({self.spec.name}, |A|={len(self.universe)}, "
                f"tau={[r for r, _ in self.vocab.relations]})")


def xi_interpretation(pi: Interpretation) -> Interpretation:
    """Apply the characteristic map literal-wise, giving a Boolean interpretation."""
    return pi.map_values(BOOLEAN, pi.spec.xi)


def canonical_boolean(universe: Iterable, vocab: Vocabulary,
                      relations: Mapping[str, Iterable[tuple]]) -> Interpretation:
    """The canonical truth interpretation of a finite structure."""
    universe = tuple(universe)
    facts: dict[str, set] = {}
    for rel, ar in vocab.relations:
        tuples = set()
        for t in relations.get(rel, ()):
            t = tuple(t)
            if len(t) != ar:
                raise InterpretationError(f"tuple {t} has wrong arity for {rel}/{ar}")
            if any(a not in universe for a in t):
                raise InterpretationError(f"tuple {t} leaves the universe")
            tuples.add(t)
        facts[rel] = tuples
    unknown = set(relations) - set(facts)
    if unknown:
        raise InterpretationError(f"unknown relations {sorted(unknown)}")

    def fn(neg, rel, args):
        holds = args in facts[rel]
        return (not holds) if neg else holds

    return Interpretation.from_function(BOOLEAN, universe, vocab, fn)


def is_model_defining(pi: Interpretation) -> bool:
    spec = pi.spec
    for rel, ar in pi.vocab.relations:
        for args in itertools.product(pi.universe, repeat=ar):
            pos_zero = spec.is_zero(pi.value(rel, args, False))
            neg_zero = spec.is_zero(pi.value(rel, args, True))
            if pos_zero == neg_zero:
                return False
    return True


# ---------------------------------------------------------------------------
# Built-in families


@dataclass
class BuiltinFamily:
    """One polarity of a built-in symbol: n -> ({1..n}^arity -> K).

    Either ``fn(n, ranks)`` computes the value, or ``tables[n][ranks]`` holds
    it with ``default`` for missing tuples. ``description`` records how the
    family was made so it can be written back to a file.
    """

    arity: int
    fn: Optional[Callable[[int, tuple], Any]] = None
    tables: dict = field(default_factory=dict)
    default: Any = None
    description: Optional[dict] = None

    def __call__(self, n: int, ranks: tuple):
        if self.fn is not None:
            return self.fn(n, ranks)
        table = self.tables.get(n)
        if table is None and self.default is None:
            raise InterpretationError(f"built-in table has no entry for n={n}")
        if table is not None and ranks in table:
            return table[ranks]
        if self.default is None:
            raise InterpretationError(f"built-in table has no entry for {ranks} at n={n}")
        return self.default


@dataclass
class BuiltinSymbol:
    arity: int
    positive: BuiltinFamily
    negative: BuiltinFamily


class BuiltinInterpretation:
    """rho: interpretations for every built-in symbol, both polarities."""

    def __init__(self, spec: Semiring, symbols: Mapping[str, BuiltinSymbol]):
        self.spec = spec
        self.symbols = dict(symbols)

    def value(self, symbol: str, n: int, ranks: tuple, negated: bool):
        try:
            sym = self.symbols[symbol]
        except KeyError:
            raise InterpretationError(f"built-in {symbol} has no interpretation") from None
        fam = sym.negative if negated else sym.positive
        return self.spec.check(fam(n, tuple(ranks)))

    def arities(self) -> dict[str, int]:
        return {k: v.arity for k, v in self.symbols.items()}


def _indicator(spec, pred):
    return lambda n, ranks: spec.one if pred(n, ranks) else spec.zero


GENERATORS = {
    "equality": lambda n, r: len(set(r)) == 1,
    "successor": lambda n, r: all(b == a + 1 for a, b in zip(r, r[1:])),
    "less": lambda n, r: all(a < b for a, b in zip(r, r[1:])),
    "first": lambda n, r: all(a == 1 for a in r),
    "last": lambda n, r: all(a == n for a in r),
}


def generated_family(spec: Semiring, arity: int, name: str, *, negate: bool = False,
                     value: Any = None) -> BuiltinFamily:
    """A named generator; ``constant`` takes ``value``; others are 0/1 indicators."""
    desc = {"generator": name}
    if name == "constant":
        v = spec.check(value)
        desc["value"] = spec.format(v)
        return BuiltinFamily(arity, fn=lambda n, r: v, description=desc)
    try:
        pred = GENERATORS[name]
    except KeyError:
        raise InterpretationError(f"unknown generator {name!r}") from None
    if negate:
        desc["negate"] = True
        return BuiltinFamily(arity, fn=_indicator(spec, lambda n, r: not pred(n, r)),
                             description=desc)
    return BuiltinFamily(arity, fn=_indicator(spec, pred), description=desc)


def indicator_symbol(spec: Semiring, arity: int, name: str) -> BuiltinSymbol:
    """Positive polarity is the generator, negative its complement."""
    return BuiltinSymbol(arity, generated_family(spec, arity, name),
                         generated_family(spec, arity, name, negate=True))


def check_builtins_cover(vocab: Vocabulary, rho: Optional[BuiltinInterpretation]):
    if not vocab.builtins:
        return
    if rho is None:
        raise FormulaError("formula uses built-ins but no built-in interpretation was given")
    for name, ar in vocab.builtins:
        if name not in rho.symbols:
            raise FormulaError(f"built-in {name} has no interpretation")
        if rho.symbols[name].arity != ar:
            raise FormulaError(f"built-in {name} arity mismatch")
