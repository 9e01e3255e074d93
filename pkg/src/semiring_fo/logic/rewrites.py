"""Boolean rewrites: negation normal form and elimination of formula comparisons."""

from __future__ import annotations

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
)


def nnf_negate(phi: Formula) -> Formula:
    """nnf(¬φ) for a comparison-free formula: dualize connectives and literals."""
    if isinstance(phi, VarEq):
        return VarEq(phi.left, phi.right, not phi.negated)
    if isinstance(phi, Atom):
        return Atom(phi.symbol, phi.args, not phi.negated)
    if isinstance(phi, BuiltinAtom):
        return BuiltinAtom(phi.symbol, phi.args, not phi.negated)
    if isinstance(phi, And):
        return Or(nnf_negate(phi.left), nnf_negate(phi.right))
    if isinstance(phi, Or):
        return And(nnf_negate(phi.left), nnf_negate(phi.right))
    if isinstance(phi, Exists):
        return Forall(phi.var, nnf_negate(phi.body))
    if isinstance(phi, Forall):
        return Exists(phi.var, nnf_negate(phi.body))
    if isinstance(phi, Compare):
        raise FormulaError("nnf_negate needs a comparison-free formula; eliminate comparisons first")
    raise FormulaError(f"not a formula node: {phi!r}")


def _eliminate_one(op: str, a: Formula, b: Formula) -> Formula:
    if op == "<=":
        return Or(nnf_negate(a), b)
    if op == "!<=":
        return And(a, nnf_negate(b))
    if op == "=":
        return Or(And(a, b), And(nnf_negate(a), nnf_negate(b)))
    if op == "!=":
        return Or(And(nnf_negate(a), b), And(a, nnf_negate(b)))
    raise FormulaError(f"unknown comparison {op}")


def eliminate_comparisons_boolean(phi: Formula) -> Formula:
    """Rewrite every comparison bottom-up into an equivalent formula over 𝔹."""
    if isinstance(phi, (VarEq, Atom, BuiltinAtom)):
        return phi
    if isinstance(phi, And):
        return And(eliminate_comparisons_boolean(phi.left), eliminate_comparisons_boolean(phi.right))
    if isinstance(phi, Or):
        return Or(eliminate_comparisons_boolean(phi.left), eliminate_comparisons_boolean(phi.right))
    if isinstance(phi, (Exists, Forall)):
        return type(phi)(phi.var, eliminate_comparisons_boolean(phi.body))
    if isinstance(phi, Compare):
        return _eliminate_one(phi.op, eliminate_comparisons_boolean(phi.left),
                              eliminate_comparisons_boolean(phi.right))
    raise FormulaError(f"not a formula node: {phi!r}")
