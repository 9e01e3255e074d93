"""Translations between FO sentences with built-ins and arithmetic circuits.

``formula_to_circuit`` unrolls a sentence over a fixed universe size into a
constant-depth circuit reading the flat encoding of the interpretation.
``circuit_to_formula`` goes the other way: gates become q-tuples over the
universe, the structure of the circuit is handed to the formula through
built-in relations, and the formula evaluates the circuit level by level.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional, Sequence

from .circuits import (
    CONST,
    EQ,
    INPUT,
    LEQ,
    NEQ,
    NLEQ,
    OUTPUT,
    PLUS,
    TIMES,
    Circuit,
    CircuitBuilder,
    CircuitError,
    check,
    is_tree_normal,
    levels,
    normalize_to_tree,
)
from .logic.encoding import encoding_length, literal_position
from .logic.interpretation import (
    BuiltinFamily,
    BuiltinInterpretation,
    BuiltinSymbol,
    Interpretation,
    check_builtins_cover,
)
from .logic.syntax import (
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
    conj,
    disj,
    exists,
    forall,
    is_sentence,
)
from .semiring import Semiring


class CompileError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Formula -> circuit


def formula_to_circuit(phi: Formula, vocab: Vocabulary, n: int, spec: Semiring,
                       rho: Optional[BuiltinInterpretation] = None) -> Circuit:
    """Circuit C_n with f_{C_n}(enc(π)) = ⟦φ⟧_{π,ρ} for every π with |A| = n.

    Input gate i reads position i of the encoding. Quantifiers become n-ary
    gates, connectives binary ones, and variable equalities and built-in
    literals constants fixed by the substitution.
    """
    if not is_sentence(phi):
        raise CompileError("only sentences can be compiled")
    if not spec.commutative:
        raise CompileError(f"{spec.name} is not commutative")
    check_vocabulary(phi, vocab)
    check_builtins_cover(vocab, rho)
    if n < 0:
        raise CompileError("universe size must be non-negative")
    b = CircuitBuilder(spec)
    inputs = [b.input() for _ in range(encoding_length(vocab, n))]

    def build(f: Formula, m: dict) -> int:
        t = type(f)
        if t is Exists or t is Forall:
            if n == 0:
                return b.const(spec.zero if t is Exists else spec.one)
            parts = []
            for r in range(1, n + 1):
                m2 = dict(m)
                m2[f.var] = r
                parts.append(build(f.body, m2))
            return (b.plus if t is Exists else b.times)(*parts)
        if t is Or:
            return b.plus(build(f.left, m), build(f.right, m))
        if t is And:
            return b.times(build(f.left, m), build(f.right, m))
        if t is Compare:
            return b.relation(f.op, build(f.left, m), build(f.right, m))
        if t is VarEq:
            same = m[f.left] == m[f.right]
            return b.const(spec.one if same != f.negated else spec.zero)
        if t is Atom:
            ranks = tuple(m[x] for x in f.args)
            return inputs[literal_position(vocab, n, f.symbol, ranks, f.negated)]
        if t is BuiltinAtom:
            return b.const(rho.value(f.symbol, n, tuple(m[x] for x in f.args), f.negated))
        raise FormulaError(f"not a formula node: {f!r}")

    b.output(build(phi, {}))
    return b.build()


def formula_circuit_size(phi: Formula, vocab: Vocabulary, n: int) -> int:
    """Exact gate count of formula_to_circuit(phi, vocab, n, ...)."""

    def nodes(f):
        t = type(f)
        if t is Exists or t is Forall:
            return 1 if n == 0 else 1 + n * nodes(f.body)
        if t in (And, Or, Compare):
            return 1 + nodes(f.left) + nodes(f.right)
        if t is Atom:
            return 0
        return 1

    return 1 + nodes(phi) + encoding_length(vocab, n)


def encoding_inputs(pi: Interpretation) -> list:
    from .logic.encoding import encode_interpretation

    return encode_interpretation(pi)


# ---------------------------------------------------------------------------
# Circuit -> formula

TYPE_BITS = {t: tuple(int(ch) for ch in format(t, "04b")) for t in range(1, 10)}
INPUT_RELATION = "R"
BUILTIN_NAMES = ("tb1", "tb2", "tb3", "tb4", "c", "in", "e", "left")


@dataclass(frozen=True)
class GateEncoding:
    q: int
    n: int
    tuple_of: dict  # gate id -> q-tuple of ranks

    def gate_of(self) -> dict:
        return {v: k for k, v in self.tuple_of.items()}


@dataclass(frozen=True)
class CompiledSentence:
    formula: Formula
    builtins: BuiltinInterpretation
    vocab: Vocabulary
    encoding: GateEncoding
    circuit: Circuit  # the circuit actually described (after input lifting)

    @property
    def universe_size(self) -> int:
        return self.encoding.n

    def interpretation(self, inputs: Sequence) -> Interpretation:
        """π over {1..n} with π(R(i)) = i-th input (0 beyond the inputs)."""
        return input_interpretation(self.circuit.spec, self.encoding.n, inputs)


def input_interpretation(spec: Semiring, n: int, inputs: Sequence) -> Interpretation:
    if len(inputs) > n:
        raise CompileError(f"{len(inputs)} inputs do not fit a universe of size {n}")
    universe = [str(i) for i in range(1, n + 1)]
    values = {}
    for i, a in enumerate(universe):
        values[(False, INPUT_RELATION, (a,))] = spec.check(inputs[i]) if i < len(inputs) else spec.zero
        values[(True, INPUT_RELATION, (a,))] = spec.zero
    return Interpretation(spec, universe, Vocabulary.of({INPUT_RELATION: 1}), values)


def universe_size_for(circuit: Circuit) -> int:
    return max(len(circuit.inputs), 2)


def minimal_q(size: int, n: int) -> int:
    q = 1
    while n ** q < size:
        q += 1
    return q


def lift_shared_inputs(circuit: Circuit) -> Circuit:
    """Route every use of a multiply-used input gate through its own unary + gate.

    Afterwards every gate has pairwise distinct predecessors with fan-out 1
    (once normalized), so predecessor pairs are identified by the edge
    relation alone.
    """
    uses: dict[int, int] = {}
    for g in circuit.gates:
        for p in g.preds:
            uses[p] = uses.get(p, 0) + 1
    shared = {g.id for g in circuit.inputs if uses.get(g.id, 0) > 1}
    if not shared:
        return circuit
    b = CircuitBuilder(circuit.spec)
    remap: dict[int, int] = {}
    for g in circuit.inputs:
        remap[g.id] = b.input()
    for g in circuit.gates:
        if g.type == INPUT:
            continue
        if g.type == CONST:
            remap[g.id] = b.const(g.value)
            continue
        preds = [b.plus(remap[p]) if p in shared else remap[p] for p in g.preds]
        remap[g.id] = b.output(preds[0]) if g.type == OUTPUT else b.gate(g.type, preds)
    return normalize_to_tree(b.build())


def structure_builtins(circuit: Circuit, enc: GateEncoding) -> BuiltinInterpretation:
    spec = circuit.spec
    n, q = enc.n, enc.q
    tup = enc.tuple_of
    one, zero = spec.one, spec.zero
    symbols = {}

    def indicator(arity, keys):
        keys = list(keys)
        pos = BuiltinFamily(arity, tables={n: {k: one for k in keys}}, default=zero)
        neg = BuiltinFamily(arity, tables={n: {k: zero for k in keys}}, default=one)
        return BuiltinSymbol(arity, pos, neg)

    for bit in range(4):
        keys = [tup[g.id] for g in circuit.gates if TYPE_BITS[g.type][bit]]
        symbols[f"tb{bit + 1}"] = indicator(q, keys)
    consts = {tup[g.id]: g.value for g in circuit.gates if g.type == CONST}
    symbols["c"] = BuiltinSymbol(q, BuiltinFamily(q, tables={n: consts}, default=zero),
                                 BuiltinFamily(q, tables={n: {}}, default=zero))
    symbols["in"] = indicator(q + 1, [tup[g.id] + (g.index,) for g in circuit.inputs])
    symbols["e"] = indicator(2 * q, [tup[p] + tup[g.id] for g in circuit.gates for p in g.preds])
    symbols["left"] = indicator(
        2 * q, [tup[g.preds[0]] + tup[g.preds[1]] for g in circuit.gates
                if g.type in (EQ, NEQ, LEQ, NLEQ)])
    return BuiltinInterpretation(spec, symbols)


def _guard(type_code: int, xs) -> Formula:
    return conj(*[BuiltinAtom(f"tb{i + 1}", tuple(xs), negated=not bit)
                  for i, bit in enumerate(TYPE_BITS[type_code])])


_CMP = {EQ: "=", NEQ: "!=", LEQ: "<=", NLEQ: "!<="}


def circuit_to_formula(circuit: Circuit, q: Optional[int] = None) -> CompiledSentence:
    """Sentence φ and built-ins ρ with ⟦φ⟧_{π,ρ} = f_C(inputs), π from ``interpretation``.

    The circuit must be tree-normal (see normalize_to_tree) with one output.
    Evaluate the result with ``short_circuit=True``; without it the nested
    guarded quantifiers still give the right value but take exponential time.
    """
    check(circuit)
    spec = circuit.spec
    if not spec.commutative:
        raise CompileError(f"{spec.name} is not commutative")
    if len(circuit.outputs) != 1:
        raise CompileError(f"circuit has {len(circuit.outputs)} outputs; exactly one is needed")
    if not is_tree_normal(circuit):
        raise CompileError("circuit is not normalized; run normalize_to_tree first")
    circuit = lift_shared_inputs(circuit)
    n = universe_size_for(circuit)
    need = minimal_q(circuit.size, n)
    if q is None:
        q = need
    elif n ** q < circuit.size:
        raise CompileError(f"circuit size {circuit.size} exceeds {n}^{q}; use q >= {need}")
    tuples = list(itertools.product(range(1, n + 1), repeat=q))
    enc = GateEncoding(q, n, {g.id: tuples[i] for i, g in enumerate(circuit.gates)})
    rho = structure_builtins(circuit, enc)

    lv = levels(circuit)
    types_at: dict[int, set] = {}
    for g in circuit.gates:
        types_at.setdefault(lv[g.id], set()).add(g.type)
    depth = lv[circuit.outputs[0].id]

    def phi(d: int, xs: tuple) -> Formula:
        if d == 0:
            w = "w"
            return Or(Exists(w, And(BuiltinAtom("in", xs + (w,)), Atom(INPUT_RELATION, (w,)))),
                      BuiltinAtom("c", xs))
        ys = tuple(f"y{d - 1}_{i}" for i in range(1, q + 1))
        zs = tuple(f"z{d - 1}_{i}" for i in range(1, q + 1))
        edge_y = BuiltinAtom("e", ys + xs)
        cases = []
        for t in sorted(types_at.get(d, ())):
            if t in (PLUS, OUTPUT):
                body = exists(ys, And(edge_y, phi(d - 1, ys)))
            elif t == TIMES:
                body = forall(ys, Or(BuiltinAtom("e", ys + xs, negated=True),
                                     And(edge_y, phi(d - 1, ys))))
            elif t in _CMP:
                body = exists(ys + zs, conj(edge_y, BuiltinAtom("e", zs + xs),
                                            BuiltinAtom("left", ys + zs),
                                            Compare(_CMP[t], phi(d - 1, ys), phi(d - 1, zs))))
            else:  # constant or input gate above level 0 cannot occur in a normal circuit
                raise CompileError(f"gate type {t} at level {d}")
            cases.append(And(_guard(t, xs), body))
        return disj(*cases)

    xs = tuple(f"x{i}" for i in range(1, q + 1))
    sentence = exists(xs, And(_guard(OUTPUT, xs), phi(depth, xs)))
    vocab = Vocabulary.of({INPUT_RELATION: 1}, rho.arities())
    return CompiledSentence(sentence, rho, vocab, enc, circuit)
