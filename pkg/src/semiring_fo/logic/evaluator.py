"""Recursive evaluation of formulas under K-interpretations, with call accounting."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Optional

from ..semiring import UnsupportedOrderError
from .interpretation import BuiltinInterpretation, Interpretation
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
    count,
    free_vars,
)


class EvaluationError(Exception):
    pass


@dataclass
class EvalStats:
    """Counters for one evaluation.

    ``calls`` counts evaluations of non-quantifier nodes; a quantifier node
    contributes only through the |A| evaluations of its body. ``invocations``
    counts every recursive entry, quantifier nodes included.
    """

    calls: int = 0
    invocations: int = 0
    conjunctions: int = 0
    disjunctions: int = 0
    comparisons: int = 0
    quantifier_expansions: int = 0
    max_depth: int = 0

    def as_dict(self) -> dict:
        return dict(self.__dict__)


def call_bound(phi: Formula, universe_size: int) -> int:
    """(2·(#∧ + #∨ + #cmp) + 1) · |A|^(#∃ + #∀).

    Comparisons have two operands, so they count like the other binary
    connectives; for comparison-free formulas this is the textbook bound.
    """
    binary = count(phi, (And, Or, Compare))
    quants = count(phi, (Exists, Forall))
    return (2 * binary + 1) * universe_size ** quants


def _compare(spec, op, a, b) -> bool:
    if op == "=":
        return a == b
    if op == "!=":
        return a != b
    if not spec.ordered:
        raise UnsupportedOrderError(f"comparison {op} needs an ordered semiring, {spec.name} is not")
    le = spec.order(a, b)
    return le if op == "<=" else not le


class _Evaluator:
    def __init__(self, pi: Interpretation, rho: Optional[BuiltinInterpretation],
                 short_circuit: bool):
        self.pi = pi
        self.rho = rho
        self.spec = pi.spec
        self.n = len(pi.universe)
        self.short = short_circuit
        self.stats = EvalStats()

    def run(self, phi: Formula, s: dict, depth: int):
        st = self.stats
        st.invocations += 1
        if depth > st.max_depth:
            st.max_depth = depth
        spec = self.spec
        t = type(phi)
        if t is Exists or t is Forall:
            var = phi.var
            had, old = var in s, s.get(var)
            is_exists = t is Exists
            acc = spec.zero if is_exists else spec.one
            try:
                for a in self.pi.universe:
                    s[var] = a
                    st.quantifier_expansions += 1
                    v = self.run(phi.body, s, depth + 1)
                    if is_exists:
                        acc = spec.plus(acc, v)
                    else:
                        acc = spec.times(acc, v)
                        if self.short and acc == spec.zero:
                            break
            finally:
                if had:
                    s[var] = old
                else:
                    s.pop(var, None)
            return acc
        st.calls += 1
        if t is Atom:
            return self.pi.value(phi.symbol, tuple(self._lookup(s, x) for x in phi.args),
                                 phi.negated)
        if t is VarEq:
            same = self._lookup(s, phi.left) == self._lookup(s, phi.right)
            return spec.one if same != phi.negated else spec.zero
        if t is BuiltinAtom:
            if self.rho is None:
                raise EvaluationError(f"built-in {phi.symbol} used but no built-in interpretation given")
            ranks = tuple(self.pi.rank(self._lookup(s, x)) for x in phi.args)
            return self.rho.value(phi.symbol, self.n, ranks, phi.negated)
        if t is And:
            st.conjunctions += 1
            left = self.run(phi.left, s, depth + 1)
            if self.short and left == spec.zero:
                return spec.zero
            return spec.times(left, self.run(phi.right, s, depth + 1))
        if t is Or:
            st.disjunctions += 1
            return spec.plus(self.run(phi.left, s, depth + 1), self.run(phi.right, s, depth + 1))
        if t is Compare:
            st.comparisons += 1
            a = self.run(phi.left, s, depth + 1)
            b = self.run(phi.right, s, depth + 1)
            return spec.one if _compare(spec, phi.op, a, b) else spec.zero
        raise FormulaError(f"not a formula node: {phi!r}")

    @staticmethod
    def _lookup(s, x):
        try:
            return s[x]
        except KeyError:
            raise EvaluationError(f"unbound variable {x}") from None


def evaluate(phi: Formula, pi: Interpretation, rho: Optional[BuiltinInterpretation] = None,
             s: Optional[Mapping] = None, *, short_circuit: bool = False):
    """Return ``(value, stats)`` for the formula under ``pi`` (and ``rho``).

    With ``short_circuit`` a conjunction skips its right operand and a
    universal quantifier stops once the running product is zero. The value is
    unchanged (zero annihilates), only the call counts shrink.
    """
    s = dict(s or {})
    missing = free_vars(phi) - set(s)
    if missing:
        raise EvaluationError(f"unbound variables: {', '.join(sorted(missing))}")
    for var, a in s.items():
        if a not in pi._rank:
            raise EvaluationError(f"assignment {var} -> {a!r} leaves the universe")
    ev = _Evaluator(pi, rho, short_circuit)
    value = ev.run(phi, s, 0)
    return value, ev.stats


def value_of(phi: Formula, pi: Interpretation, rho=None, s=None, **kw):
    return evaluate(phi, pi, rho, s, **kw)[0]
