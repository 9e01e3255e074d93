"""Arithmetic circuits over commutative semirings with relation gates.

Type codes::

    1 input   2 constant   3 +   4 ×   5 output   6 =   7 ≠   8 ≤   9 ≰
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterable, Optional, Sequence

from .semiring import Semiring, UnsupportedOrderError, get_semiring

INPUT, CONST, PLUS, TIMES, OUTPUT, EQ, NEQ, LEQ, NLEQ = range(1, 10)
TYPE_NAMES = {
    INPUT: "input", CONST: "constant", PLUS: "+", TIMES: "×", OUTPUT: "output",
    EQ: "=", NEQ: "≠", LEQ: "≤", NLEQ: "≰",
}
RELATION_TYPES = (EQ, NEQ, LEQ, NLEQ)
OP_TO_TYPE = {"=": EQ, "!=": NEQ, "<=": LEQ, "!<=": NLEQ}


class CircuitError(ValueError):
    pass


@dataclass(frozen=True)
class Gate:
    id: int
    type: int
    preds: tuple[int, ...] = ()
    value: Any = None  # constant gates
    index: Optional[int] = None  # 1-based position for input and output gates


@dataclass(frozen=True)
class Circuit:
    """Gates listed in a topological order (predecessors first)."""

    spec: Semiring
    gates: tuple[Gate, ...]
    _by_id: dict = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))
        object.__setattr__(self, "_by_id", {g.id: g for g in self.gates})

    def gate(self, gid: int) -> Gate:
        return self._by_id[gid]

    @property
    def inputs(self) -> list[Gate]:
        return sorted((g for g in self.gates if g.type == INPUT), key=lambda g: g.index)

    @property
    def outputs(self) -> list[Gate]:
        return sorted((g for g in self.gates if g.type == OUTPUT), key=lambda g: g.index)

    @property
    def size(self) -> int:
        return len(self.gates)

    def successors(self) -> dict[int, list[int]]:
        succ: dict[int, list[int]] = {g.id: [] for g in self.gates}
        for g in self.gates:
            for p in g.preds:
                if p in succ:
                    succ[p].append(g.id)
        return succ


# ---------------------------------------------------------------------------
# Building


class CircuitBuilder:
    """Incremental construction with fresh ids; gates come out topologically sorted."""

    def __init__(self, spec: Semiring):
        self.spec = spec
        self.gates: list[Gate] = []
        self._n_in = 0
        self._n_out = 0

    def _add(self, type_, preds=(), value=None, index=None) -> int:
        gid = len(self.gates) + 1
        self.gates.append(Gate(gid, type_, tuple(preds), value, index))
        return gid

    def input(self) -> int:
        self._n_in += 1
        return self._add(INPUT, index=self._n_in)

    def const(self, value) -> int:
        return self._add(CONST, value=self.spec.check(value))

    def plus(self, *preds) -> int:
        return self._add(PLUS, preds)

    def times(self, *preds) -> int:
        return self._add(TIMES, preds)

    def relation(self, op: str, a: int, b: int) -> int:
        return self._add(OP_TO_TYPE[op], (a, b))

    def gate(self, type_, preds) -> int:
        return self._add(type_, preds)

    def output(self, pred: int) -> int:
        self._n_out += 1
        return self._add(OUTPUT, (pred,), index=self._n_out)

    def build(self) -> Circuit:
        return Circuit(self.spec, tuple(self.gates))


# ---------------------------------------------------------------------------
# Validation and measurement


def validate(circuit: Circuit) -> list[str]:
    """Well-formedness problems; an empty list means the circuit is fine."""
    problems: list[str] = []
    spec = circuit.spec
    seen: set[int] = set()
    ids = [g.id for g in circuit.gates]
    if len(set(ids)) != len(ids):
        problems.append("duplicate gate ids")
    all_ids = set(ids)
    if not circuit.gates:
        problems.append("empty circuit")
    for g in circuit.gates:
        where = f"gate {g.id}"
        if g.type not in TYPE_NAMES:
            problems.append(f"{where}: unknown type code {g.type}")
            seen.add(g.id)
            continue
        for p in g.preds:
            if p not in all_ids:
                problems.append(f"{where}: predecessor {p} does not exist")
            elif p not in seen:
                problems.append(f"{where}: predecessor {p} is listed later (not a topological order)")
        k = len(g.preds)
        if g.type in (INPUT, CONST) and k:
            problems.append(f"{where}: {TYPE_NAMES[g.type]} gate must have indegree 0")
        if g.type in (PLUS, TIMES) and k < 1:
            problems.append(f"{where}: {TYPE_NAMES[g.type]} gate needs at least one predecessor")
        if g.type == OUTPUT and k != 1:
            problems.append(f"{where}: output gate needs exactly one predecessor")
        if g.type in RELATION_TYPES and k != 2:
            problems.append(f"{where}: relation gate needs exactly two predecessors, has {k}")
        if g.type in (LEQ, NLEQ) and not spec.ordered:
            problems.append(f"{where}: order gate over unordered semiring {spec.name}")
        if g.type == CONST:
            if g.value is None or not spec.contains(g.value):
                problems.append(f"{where}: constant {g.value!r} is not in {spec.name}")
        if g.type in (INPUT, OUTPUT) and g.index is None:
            problems.append(f"{where}: {TYPE_NAMES[g.type]} gate lacks an index")
        seen.add(g.id)
    succ = circuit.successors()
    for g in circuit.gates:
        if g.type == OUTPUT and succ.get(g.id):
            problems.append(f"gate {g.id}: output gate has successors")
    for kind, gs in (("input", circuit.inputs), ("output", circuit.outputs)):
        idx = [g.index for g in gs]
        if None not in idx and sorted(idx) != list(range(1, len(idx) + 1)):
            problems.append(f"{kind} indices are not 1..{len(idx)}")
    if not circuit.outputs:
        problems.append("circuit has no output gate")
    # every non-input gate must reach an output
    reach = {g.id for g in circuit.gates if g.type == OUTPUT}
    for g in reversed(circuit.gates):
        if g.id in reach:
            reach.update(p for p in g.preds)
    for g in circuit.gates:
        if g.type != INPUT and g.id not in reach:
            problems.append(f"gate {g.id}: no path to an output")
    return problems


def check(circuit: Circuit) -> Circuit:
    problems = validate(circuit)
    if problems:
        raise CircuitError("; ".join(problems))
    return circuit


def levels(circuit: Circuit) -> dict[int, int]:
    """Longest distance from an indegree-0 gate."""
    lv: dict[int, int] = {}
    for g in circuit.gates:
        lv[g.id] = 1 + max(lv[p] for p in g.preds) if g.preds else 0
    return lv


def measure(circuit: Circuit) -> tuple[int, int]:
    """(size, depth); depth is the longest source-to-output path in edges."""
    check(circuit)
    lv = levels(circuit)
    return circuit.size, max(lv[g.id] for g in circuit.outputs)


# ---------------------------------------------------------------------------
# Evaluation


def _relation(spec, type_, a, b):
    if type_ == EQ:
        r = a == b
    elif type_ == NEQ:
        r = a != b
    else:
        if not spec.ordered:
            raise UnsupportedOrderError(f"order gate over unordered semiring {spec.name}")
        le = spec.order(a, b)
        r = le if type_ == LEQ else not le
    return spec.one if r else spec.zero


def evaluate_circuit(circuit: Circuit, inputs: Sequence) -> list:
    spec = circuit.spec
    ins = circuit.inputs
    if len(inputs) != len(ins):
        raise CircuitError(f"circuit has {len(ins)} inputs, got {len(inputs)} values")
    val: dict[int, Any] = {}
    for g in ins:
        val[g.id] = spec.check(inputs[g.index - 1])
    for g in circuit.gates:
        t = g.type
        if t == INPUT:
            continue
        if t == CONST:
            val[g.id] = spec.check(g.value)
        elif t == PLUS:
            acc = val[g.preds[0]]
            for p in g.preds[1:]:
                acc = spec.plus(acc, val[p])
            val[g.id] = acc
        elif t == TIMES:
            acc = val[g.preds[0]]
            for p in g.preds[1:]:
                acc = spec.times(acc, val[p])
            val[g.id] = acc
        elif t == OUTPUT:
            val[g.id] = val[g.preds[0]]
        else:
            val[g.id] = _relation(spec, t, val[g.preds[0]], val[g.preds[1]])
    return [val[g.id] for g in circuit.outputs]


# ---------------------------------------------------------------------------
# Tree normalization


def normalize_to_tree(circuit: Circuit) -> Circuit:
    """Equivalent circuit where non-input gates have fan-out 1 and every gate
    sits at a single distance from the sources.

    Shared subcircuits are copied once per use; a predecessor that is too
    shallow is lifted with unary + gates. Input gates stay shared.
    """
    check(circuit)
    lv = levels(circuit)
    b = CircuitBuilder(circuit.spec)
    new_input: dict[int, int] = {}
    for g in circuit.inputs:
        new_input[g.id] = b.input()

    def copy(gid: int, at: int) -> int:
        g = circuit.gate(gid)
        if at > lv[gid]:
            return b.plus(copy(gid, at - 1))
        if g.type == INPUT:
            return new_input[gid]
        if g.type == CONST:
            return b.const(g.value)
        preds = [copy(p, at - 1) for p in g.preds]
        return b.gate(g.type, preds)

    for out in circuit.outputs:
        b.output(copy(out.preds[0], lv[out.id] - 1))
    return b.build()


def is_tree_normal(circuit: Circuit) -> bool:
    succ = circuit.successors()
    lv = levels(circuit)
    for g in circuit.gates:
        if g.type != INPUT and len(succ[g.id]) > 1:
            return False
        if g.preds and any(lv[p] != lv[g.id] - 1 for p in g.preds):
            return False
    return True


def input_path_lengths(circuit: Circuit) -> dict[int, set[int]]:
    """For every gate, the set of lengths of paths reaching it from input gates."""
    out: dict[int, set[int]] = {}
    for g in circuit.gates:
        if g.type == INPUT:
            out[g.id] = {0}
        else:
            out[g.id] = {l + 1 for p in g.preds for l in out[p]}
    return out


# ---------------------------------------------------------------------------
# Random circuits


def random_circuit(spec: Semiring, rng, *, n_inputs: int = 3, max_size: int = 12,
                   max_depth: int = 3, relations: Iterable[str] = ("=", "!=", "<=", "!<="),
                   constants: bool = True) -> Circuit:
    """A random well-formed single-output circuit within the size/depth limits."""
    from .semiring import random_element

    relations = [r for r in relations if spec.ordered or r in ("=", "!=")]
    for _ in range(1000):
        b = CircuitBuilder(spec)
        pool: list[tuple[int, int]] = [(b.input(), 0) for _ in range(n_inputs)]
        if constants and rng.random() < 0.5:
            pool.append((b.const(random_element(spec, rng)), 0))
        budget = max_size - len(pool) - 1
        n_ops = rng.randint(1, max(1, budget))
        for _ in range(n_ops):
            choices = [(gid, d) for gid, d in pool if d < max_depth]
            if not choices:
                break
            kind = rng.random()
            if relations and kind < 0.25:
                (a, da), (c, dc) = rng.choice(choices), rng.choice(choices)
                pool.append((b.relation(rng.choice(relations), a, c), 1 + max(da, dc)))
            else:
                k = rng.randint(1, min(3, len(choices)))
                picks = [rng.choice(choices) for _ in range(k)]
                gid = (b.plus if kind < 0.6 else b.times)(*[p for p, _ in picks])
                pool.append((gid, 1 + max(d for _, d in picks)))
        top = pool[-1][0]
        c = b.build()
        # drop gates that do not feed the chosen top gate
        keep = {top}
        for g in reversed(c.gates):
            if g.id in keep:
                keep.update(g.preds)
        b2 = CircuitBuilder(spec)
        remap = {}
        for g in c.gates:
            if g.type == INPUT:
                remap[g.id] = b2.input()
            elif g.id in keep:
                if g.type == CONST:
                    remap[g.id] = b2.const(g.value)
                else:
                    remap[g.id] = b2.gate(g.type, [remap[p] for p in g.preds])
        b2.output(remap[top])
        out = b2.build()
        size, depth = measure(out)
        if size <= max_size and depth <= max_depth + 1 and not validate(out):
            return out
    raise CircuitError("could not draw a circuit within the limits")


# ---------------------------------------------------------------------------
# Files


def circuit_to_doc(circuit: Circuit) -> dict:
    spec = circuit.spec
    gates = []
    for g in circuit.gates:
        rec: dict[str, Any] = {"id": g.id, "type": g.type}
        if g.preds:
            rec["preds"] = list(g.preds)
        if g.type == CONST:
            rec["value"] = spec.format(g.value)
        if g.index is not None:
            rec["index"] = g.index
        gates.append(rec)
    return {"semiring": spec.name, "gates": gates}


def circuit_from_doc(doc: dict, spec: Semiring | None = None) -> Circuit:
    name = doc.get("semiring")
    if spec is None:
        if name is None:
            raise CircuitError("circuit document does not name a semiring")
        spec = get_semiring(name)
    elif name is not None and get_semiring(name) is not spec:
        raise CircuitError(f"circuit is over {name}, but {spec.name} was requested")
    gates = []
    for rec in doc.get("gates", []):
        try:
            value = spec.parse(str(rec["value"])) if "value" in rec else None
            gates.append(Gate(int(rec["id"]), int(rec["type"]),
                              tuple(int(p) for p in rec.get("preds", ())), value,
                              rec.get("index")))
        except (KeyError, TypeError, ValueError) as exc:
            raise CircuitError(f"bad gate record {rec!r}: {exc}") from None
    return Circuit(spec, tuple(gates))


def load_circuit(path, spec: Semiring | None = None) -> Circuit:
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise CircuitError(f"{path}: invalid JSON at line {exc.lineno}: {exc.msg}") from None
    return circuit_from_doc(doc, spec)


def save_circuit(circuit: Circuit, path) -> None:
    Path(path).write_text(json.dumps(circuit_to_doc(circuit), indent=2) + "\n")


def to_dot(circuit: Circuit) -> str:
    spec = circuit.spec
    lines = ["digraph circuit {", "  rankdir=BT;"]
    for g in circuit.gates:
        label = TYPE_NAMES[g.type]
        if g.type == CONST:
            label = spec.format(g.value)
        elif g.type in (INPUT, OUTPUT):
            label = f"{'x' if g.type == INPUT else 'y'}{g.index}"
        shape = "box" if g.type in (INPUT, OUTPUT) else "ellipse"
        lines.append(f'  g{g.id} [label="{label}", shape={shape}];')
    for g in circuit.gates:
        for k, p in enumerate(g.preds):
            attr = f' [label="{k + 1}"]' if g.type in RELATION_TYPES else ""
            lines.append(f"  g{p} -> g{g.id}{attr};")
    lines.append("}")
    return "\n".join(lines) + "\n"
