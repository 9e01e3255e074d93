"""K-Turing machines: tapes over Γ ∪ K with K-valued registers.

Tape symbols from Γ are Python strings; every other cell content is a
semiring element. The head starts on coordinate 1, where the input begins.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional, Sequence

from ..semiring import Semiring, UnsupportedOrderError, get_semiring
from .bss import MachineError, StepLimitExceeded

COMPARISONS = ("=", "!=", "<=", "!<=")
MOVES = {"L": -1, "R": 1, "N": 0}


@dataclass(frozen=True)
class Write:
    """Action on the current cell: a symbol, a constant, identity, or cell ⋆ register."""

    kind: str  # symbol | value | id | op
    symbol: Optional[str] = None
    value: Any = None  # element text, resolved against the semiring
    op: Optional[str] = None  # "+" or "*"
    register: Optional[str] = None


ID = Write("id")


@dataclass(frozen=True)
class Transition:
    next: str
    write: Write = ID
    assign: tuple[str, ...] = ()
    move: str = "N"


@dataclass(frozen=True)
class KtmProgram:
    """δ is keyed by (state, read) where read is a Γ symbol, or True/False for
    the outcome of the comparison P(state) on a K cell."""

    states: tuple[str, ...]
    initial: str
    registers: tuple[str, ...]
    alphabet: tuple[str, ...]
    blank: str
    predicate: dict  # state -> (comparison, register)
    transitions: dict  # (state, read) -> Transition
    input_alphabet: tuple[str, ...] = ()
    name: str = ""
    semiring: Optional[str] = None
    meta: dict = field(default_factory=dict, compare=False)

    @property
    def comparisons(self) -> tuple[str, ...]:
        return tuple(sorted({op for op, _ in self.predicate.values()}))


def validate_ktm(p: KtmProgram) -> list[str]:
    problems = []
    if not p.alphabet:
        problems.append("tape alphabet is empty")
    if p.blank not in p.alphabet:
        problems.append(f"blank {p.blank!r} is not in the alphabet")
    if len(set(p.alphabet)) != len(p.alphabet):
        problems.append("alphabet has repeated symbols")
    if p.initial not in p.states:
        problems.append(f"initial state {p.initial!r} is not a state")
    for s in p.input_alphabet:
        if s not in p.alphabet or s == p.blank:
            problems.append(f"input symbol {s!r} must be a non-blank tape symbol")
    for q, (op, r) in p.predicate.items():
        if q not in p.states:
            problems.append(f"predicate for unknown state {q!r}")
        if op not in COMPARISONS:
            problems.append(f"state {q}: unknown comparison {op!r}")
        if r not in p.registers:
            problems.append(f"state {q}: unknown register {r!r}")
    for (q, read), t in p.transitions.items():
        where = f"δ({q}, {read})"
        if q not in p.states or t.next not in p.states:
            problems.append(f"{where}: unknown state")
        if isinstance(read, bool):
            if q not in p.predicate:
                problems.append(f"{where}: state reads K cells but has no predicate")
        elif read not in p.alphabet:
            problems.append(f"{where}: {read!r} is not a tape symbol")
        if t.move not in MOVES:
            problems.append(f"{where}: move must be L, R or N")
        for r in t.assign:
            if r not in p.registers:
                problems.append(f"{where}: unknown register {r!r}")
        w = t.write
        if w.kind == "symbol" and w.symbol not in p.alphabet:
            problems.append(f"{where}: writes unknown symbol {w.symbol!r}")
        if w.kind == "op" and (w.op not in ("+", "*") or w.register not in p.registers):
            problems.append(f"{where}: bad register operation")
        if w.kind not in ("symbol", "value", "id", "op"):
            problems.append(f"{where}: unknown write kind {w.kind!r}")
    return problems


def check_ktm(p: KtmProgram) -> KtmProgram:
    problems = validate_ktm(p)
    if problems:
        raise MachineError("; ".join(problems))
    return p


@dataclass
class KtmStats:
    steps: int = 0
    lo: int = 1
    hi: int = 1
    halt_reason: str = ""

    @property
    def span(self) -> int:
        return self.hi - self.lo + 1

    def as_dict(self) -> dict:
        return {"steps": self.steps, "span": self.span, "lo": self.lo, "hi": self.hi,
                "halt": self.halt_reason}


@dataclass
class KtmConfig:
    tape: dict
    head: int
    state: str
    registers: dict


def _compare(spec: Semiring, op: str, a, b) -> bool:
    if op in ("=", "!="):
        return (a == b) == (op == "=")
    if not spec.ordered:
        raise UnsupportedOrderError(f"comparison {op} on unordered semiring {spec.name}")
    le = spec.order(a, b)
    return le if op == "<=" else not le


def resolve_value(spec: Semiring, text):
    if text == "zero":
        return spec.zero
    if text == "one":
        return spec.one
    return spec.parse(str(text))


def ktm_run(p: KtmProgram, inputs: Sequence, spec: Semiring, *, step_limit: int = 10**6,
            trace=None, return_config: bool = False):
    """Run to a halt; the output is the cells from the head up to the first blank."""
    check_ktm(p)
    if step_limit <= 0:
        raise MachineError("step limit must be positive")
    tape: dict[int, Any] = {}
    for i, a in enumerate(inputs, 1):
        if isinstance(a, str):
            if a not in p.input_alphabet:
                raise MachineError(f"input symbol {a!r} is not in the input alphabet")
            tape[i] = a
        else:
            tape[i] = spec.check(a)
    regs = {r: spec.zero for r in p.registers}
    cfg = KtmConfig(tape, 1, p.initial, regs)
    stats = KtmStats(lo=1, hi=max(1, len(inputs)))
    while True:
        a = tape.get(cfg.head, p.blank)
        if isinstance(a, str):
            key = (cfg.state, a)
        elif cfg.state in p.predicate:
            op, r = p.predicate[cfg.state]
            key = (cfg.state, _compare(spec, op, a, regs[r]))
        else:
            stats.halt_reason = "no predicate for a K cell"
            break
        t = p.transitions.get(key)
        if t is None:
            stats.halt_reason = "undefined transition"
            break
        w = t.write
        if isinstance(a, str) and (t.assign or w.kind == "op"):
            stats.halt_reason = "ill-typed action"
            break
        if stats.steps >= step_limit:
            raise StepLimitExceeded(f"step limit {step_limit} exceeded in state {cfg.state}", stats)
        stats.steps += 1
        if trace is not None:
            trace(f"step {stats.steps} state {cfg.state} head {cfg.head} read {_show(spec, a)}")
        if w.kind == "symbol":
            new = w.symbol
        elif w.kind == "value":
            new = resolve_value(spec, w.value)
        elif w.kind == "op":
            new = (spec.plus if w.op == "+" else spec.times)(a, regs[w.register])
        else:
            new = a
        for r in t.assign:
            regs[r] = a
        if isinstance(new, str) and new == p.blank:
            tape.pop(cfg.head, None)
        else:
            tape[cfg.head] = new
        cfg.head += MOVES[t.move]
        cfg.state = t.next
        stats.lo = min(stats.lo, cfg.head)
        stats.hi = max(stats.hi, cfg.head)
    out = []
    pos = cfg.head
    while True:
        a = tape.get(pos, p.blank)
        if isinstance(a, str) and a == p.blank:
            break
        out.append(a)
        pos += 1
    if return_config:
        return out, stats, cfg
    return out, stats


def _show(spec, a):
    return a if isinstance(a, str) else spec.format(a)


# ---------------------------------------------------------------------------
# Files
#
# {"kind": "ktm", "semiring": "natural", "states": [...], "initial": "q0",
#  "registers": ["r"], "alphabet": ["_", "#"], "blank": "_",
#  "input_alphabet": [], "predicate": {"q0": ["<=", "r"]},
#  "transitions": [{"state": "q0", "read": "_" | true | false, "next": "q1",
#                   "write": {"symbol": "#"} | {"value": "3"} | "id"
#                            | {"op": "*", "register": "r"},
#                   "assign": ["r"], "move": "R"}]}


def _write_from_doc(w) -> Write:
    if w in (None, "id"):
        return ID
    if "symbol" in w:
        return Write("symbol", symbol=str(w["symbol"]))
    if "value" in w:
        return Write("value", value=str(w["value"]))
    if "op" in w:
        return Write("op", op=w["op"], register=w["register"])
    raise MachineError(f"unknown write action {w!r}")


def _write_to_doc(w: Write):
    if w.kind == "id":
        return "id"
    if w.kind == "symbol":
        return {"symbol": w.symbol}
    if w.kind == "value":
        return {"value": w.value}
    return {"op": w.op, "register": w.register}


def ktm_from_doc(doc: dict) -> KtmProgram:
    try:
        transitions = {}
        for rec in doc["transitions"]:
            read = rec["read"]
            key = (rec["state"], read)
            if key in transitions:
                raise MachineError(f"δ({key[0]}, {read}) defined twice")
            transitions[key] = Transition(rec["next"], _write_from_doc(rec.get("write")),
                                          tuple(rec.get("assign", ())), rec.get("move", "N"))
        prog = KtmProgram(
            states=tuple(doc["states"]), initial=doc["initial"],
            registers=tuple(doc.get("registers", ())), alphabet=tuple(doc["alphabet"]),
            blank=doc["blank"],
            predicate={q: (v[0], v[1]) for q, v in doc.get("predicate", {}).items()},
            transitions=transitions, input_alphabet=tuple(doc.get("input_alphabet", ())),
            name=doc.get("name", ""), semiring=doc.get("semiring"), meta=doc.get("meta", {}))
    except (KeyError, TypeError, IndexError) as exc:
        raise MachineError(f"malformed K-TM document: {exc}") from None
    return check_ktm(prog)


def ktm_to_doc(p: KtmProgram) -> dict:
    doc = {"kind": "ktm", "name": p.name}
    if p.semiring:
        doc["semiring"] = p.semiring
    doc.update(states=list(p.states), initial=p.initial, registers=list(p.registers),
               alphabet=list(p.alphabet), blank=p.blank, input_alphabet=list(p.input_alphabet),
               predicate={q: list(v) for q, v in p.predicate.items()})
    doc["transitions"] = [
        {"state": q, "read": read, "next": t.next, "write": _write_to_doc(t.write),
         "assign": list(t.assign), "move": t.move}
        for (q, read), t in p.transitions.items()
    ]
    return doc


def load_ktm(path) -> KtmProgram:
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise MachineError(f"{path}: invalid JSON at line {exc.lineno}: {exc.msg}") from None
    return ktm_from_doc(doc)


def ktm_spec(p: KtmProgram, default: Semiring | None = None) -> Semiring | None:
    return get_semiring(p.semiring) if p.semiring else default
