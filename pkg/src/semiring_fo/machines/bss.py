"""BSS machines over a semiring: programs, an assembler, and the interpreter.

A state is a two-way infinite sequence (..., x_-1, x_0 . x_1, x_2, ...)
stored sparsely as absolute coordinates plus an offset, so that x_i lives at
``cells[i + offset]``. Shifting left (x_i <- x_{i+1}) increments the offset.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Optional, Sequence

from ..semiring import Semiring, UnsupportedOrderError, get_semiring
from . import _bss_py
from ._bss_py import (K_ADD, K_BEQ, K_BLEQ, K_CONST, K_INPUT, K_MUL, K_OUTPUT, K_SHL,
                      K_SHR)

try:  # compiled kernel unless disabled or not built
    if os.environ.get("SEMIRING_FO_PURE_PYTHON"):
        raise ImportError
    from . import _bss_kernel as _kernel

    KERNEL = "cython"
except ImportError:  # pragma: no cover - depends on the build
    _kernel = _bss_py
    KERNEL = "python"

BACKENDS = {"python": _bss_py.run_loop, "cython": _kernel.run_loop}

COMPUTE_OPS = ("add", "mul", "const")
BRANCH_MODES = ("eq", "leq")


class MachineError(Exception):
    pass


class StepLimitExceeded(MachineError):
    def __init__(self, message, stats=None):
        super().__init__(message)
        self.stats = stats


@dataclass(frozen=True)
class Node:
    """One node. ``kind`` is input, output, add, mul, const, branch or shift.

    add/mul: x_target <- x_args[0] (+|×) x_args[1]; const: x_target <- value,
    where value is "zero", "one" or element text. branch: ``yes`` when
    x_1 = x_2 (mode eq) or x_1 ⊑ x_2 (mode leq), else ``no``. shift:
    direction "l" (x_i <- x_{i+1}) or "r" (x_i <- x_{i-1}).
    """

    label: int
    kind: str
    next: Optional[int] = None
    target: Optional[int] = None
    args: tuple = ()
    value: Optional[str] = None
    mode: Optional[str] = None
    yes: Optional[int] = None
    no: Optional[int] = None
    direction: Optional[str] = None


@dataclass(frozen=True)
class BssProgram:
    nodes: tuple[Node, ...]
    name: str = ""
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(self.nodes))

    def __len__(self):
        return len(self.nodes)

    def node(self, label: int) -> Node:
        return self.nodes[label - 1]


def validate_program(prog: BssProgram) -> list[str]:
    problems = []
    n = len(prog.nodes)
    if n < 2:
        return ["a program needs at least an input and an output node"]
    for i, nd in enumerate(prog.nodes, 1):
        if nd.label != i:
            problems.append(f"node at position {i} is labeled {nd.label}")
    if prog.nodes[0].kind != "input":
        problems.append("node 1 must be the input node")
    if prog.nodes[-1].kind != "output":
        problems.append(f"node {n} must be the output node")
    for nd in prog.nodes:
        where = f"node {nd.label}"
        if nd.kind == "input" and nd.label != 1:
            problems.append(f"{where}: second input node")
        if nd.kind == "output" and nd.label != n:
            problems.append(f"{where}: second output node")
        if nd.kind not in ("input", "output", "add", "mul", "const", "branch", "shift"):
            problems.append(f"{where}: unknown kind {nd.kind!r}")
            continue
        targets = []
        if nd.kind == "branch":
            targets = [nd.yes, nd.no]
            if nd.mode not in BRANCH_MODES:
                problems.append(f"{where}: branch mode must be eq or leq")
        elif nd.kind != "output":
            targets = [nd.next]
        for t in targets:
            if not isinstance(t, int) or not 1 <= t <= n:
                problems.append(f"{where}: target {t!r} is not a node label 1..{n}")
        if nd.kind in ("add", "mul") and (len(nd.args) != 2 or nd.target is None):
            problems.append(f"{where}: {nd.kind} needs a target and two operands")
        if nd.kind == "const" and (nd.target is None or nd.value is None):
            problems.append(f"{where}: const needs a target and a value")
        if nd.kind == "shift" and nd.direction not in ("l", "r"):
            problems.append(f"{where}: shift direction must be l or r")
    return problems


# ---------------------------------------------------------------------------
# Assembler with symbolic labels

_FALL = object()


class Asm:
    """Straight-line emission with labels and jumps.

    Each emitted node falls through to the next one unless redirected by
    ``goto`` or a branch target. ``copy`` costs two nodes (clear, then add).
    """

    def __init__(self, name: str = ""):
        self.name = name
        self.items: list[dict] = []
        self.marks: dict[str, int] = {}
        self.aliases: dict[str, str] = {}
        self._pending: list[str] = []
        self._counter = 0
        self._emit({"kind": "input", "next": _FALL})

    def fresh(self, stem: str = "L") -> str:
        self._counter += 1
        return f"{stem}#{self._counter}"

    def _emit(self, item: dict) -> int:
        idx = len(self.items)
        for m in self._pending:
            self.marks[m] = idx
        self._pending = []
        self.items.append(item)
        return idx

    def mark(self, name: str) -> str:
        if name in self.marks or name in self.aliases or name in self._pending:
            raise MachineError(f"label {name} defined twice")
        self._pending.append(name)
        return name

    @property
    def here(self) -> int:
        return len(self.items)

    def goto(self, label: str) -> None:
        if self._pending:
            for m in self._pending:
                self.aliases[m] = label
            self._pending = []
            return
        last = self.items[-1]
        hit = False
        for key in ("next", "yes", "no"):
            if last.get(key) is _FALL:
                last[key] = label
                hit = True
        if not hit:
            raise MachineError("goto after a node without a fall-through")

    # node emitters
    def const(self, target: int, value: str = "zero"):
        self._emit({"kind": "const", "target": target, "value": str(value), "next": _FALL})

    def add(self, target: int, a: int, b: int):
        self._emit({"kind": "add", "target": target, "args": (a, b), "next": _FALL})

    def mul(self, target: int, a: int, b: int):
        self._emit({"kind": "mul", "target": target, "args": (a, b), "next": _FALL})

    def copy(self, target: int, source: int):
        if target == source:
            return
        self.const(target, "zero")
        self.add(target, source, target)

    def shift(self, direction: str, times: int = 1):
        for _ in range(times):
            self._emit({"kind": "shift", "direction": direction, "next": _FALL})

    def branch(self, mode: str = "eq", yes=None, no=None):
        self._emit({"kind": "branch", "mode": mode,
                    "yes": _FALL if yes is None else yes,
                    "no": _FALL if no is None else no})

    def halt(self):
        """Jump to the output node."""
        self.goto("__halt__")

    def assemble(self, meta: dict | None = None) -> BssProgram:
        out_idx = self._emit({"kind": "output"})
        self.marks["__halt__"] = out_idx

        def resolve(t, idx):
            if t is _FALL:
                return idx + 2
            seen = set()
            while t in self.aliases:
                if t in seen:
                    raise MachineError(f"jump cycle through label {t}")
                seen.add(t)
                t = self.aliases[t]
            if isinstance(t, str):
                if t not in self.marks:
                    raise MachineError(f"undefined label {t}")
                return self.marks[t] + 1
            raise MachineError(f"bad jump target {t!r}")

        nodes = []
        for idx, it in enumerate(self.items):
            kw = {k: v for k, v in it.items() if k not in ("next", "yes", "no")}
            for key in ("next", "yes", "no"):
                if key in it:
                    kw[key] = resolve(it[key], idx)
            nodes.append(Node(label=idx + 1, **kw))
        prog = BssProgram(tuple(nodes), self.name, dict(meta or {}))
        problems = validate_program(prog)
        if problems:
            raise MachineError("; ".join(problems))
        return prog


# ---------------------------------------------------------------------------
# Execution


@dataclass
class BssStats:
    steps: int = 0
    lo: int = 0
    hi: int = 0

    @property
    def span(self) -> int:
        return self.hi - self.lo + 1 if self.hi >= self.lo else 0

    def as_dict(self) -> dict:
        return {"steps": self.steps, "span": self.span, "lo": self.lo, "hi": self.hi}


@dataclass
class BssState:
    """Absolute cells plus offset: x_i == cells.get(i + offset, zero)."""

    spec: Semiring
    cells: dict
    offset: int = 0

    def x(self, i: int):
        return self.cells.get(i + self.offset, self.spec.zero)

    def region(self, lo: int, hi: int) -> list:
        return [self.x(i) for i in range(lo, hi + 1)]

    def relative(self) -> dict:
        return {k - self.offset: v for k, v in self.cells.items()}

    def nonzero_span(self) -> tuple[int, int] | None:
        keys = [k - self.offset for k, v in self.cells.items() if v != self.spec.zero]
        return (min(keys), max(keys)) if keys else None


def _tables(prog: BssProgram, spec: Semiring):
    n = len(prog.nodes)
    kind = [0] * (n + 1)
    tgt = [0] * (n + 1)
    a1 = [0] * (n + 1)
    a2 = [0] * (n + 1)
    nxt = [0] * (n + 1)
    nxt2 = [0] * (n + 1)
    consts = [spec.zero, spec.one]
    index = {}
    needs_order = False
    for nd in prog.nodes:
        i = nd.label
        if nd.kind == "input":
            kind[i], nxt[i] = K_INPUT, nd.next
        elif nd.kind == "output":
            kind[i] = K_OUTPUT
        elif nd.kind in ("add", "mul"):
            kind[i] = K_ADD if nd.kind == "add" else K_MUL
            tgt[i], a1[i], a2[i], nxt[i] = nd.target, nd.args[0], nd.args[1], nd.next
        elif nd.kind == "const":
            text = nd.value
            if text in ("zero", "one"):
                val = spec.zero if text == "zero" else spec.one
            else:
                try:
                    val = spec.parse(text)
                except ValueError as exc:
                    raise MachineError(f"node {i}: {exc}") from None
            key = (type(val).__name__, repr(val))
            if val == spec.zero:
                ci = 0
            elif val == spec.one:
                ci = 1
            else:
                ci = index.setdefault(key, len(consts))
                if ci == len(consts):
                    consts.append(val)
            kind[i], tgt[i], a1[i], nxt[i] = K_CONST, nd.target, ci, nd.next
        elif nd.kind == "branch":
            if nd.mode == "leq":
                needs_order = True
            kind[i] = K_BEQ if nd.mode == "eq" else K_BLEQ
            nxt[i], nxt2[i] = nd.yes, nd.no
        elif nd.kind == "shift":
            kind[i] = K_SHL if nd.direction == "l" else K_SHR
            nxt[i] = nd.next
    if needs_order and not spec.ordered:
        raise UnsupportedOrderError(f"order branch on unordered semiring {spec.name}")
    return kind, tgt, a1, a2, nxt, nxt2, consts


def run_state(prog: BssProgram, spec: Semiring, state: BssState, *, step_limit: int = 10**7,
              start: int = 1, backend: str | None = None,
              trace: Optional[Callable[[str], None]] = None) -> BssStats:
    """Run ``prog`` on ``state`` in place, from node ``start`` to the output node."""
    problems = validate_program(prog)
    if problems:
        raise MachineError("; ".join(problems))
    if step_limit <= 0:
        raise MachineError("step limit must be positive")
    tables = _tables(prog, spec)
    keys = list(state.cells)
    lo = min(keys) if keys else state.offset + 1
    hi = max(keys) if keys else state.offset + 1
    order = spec.order if spec.ordered else None
    if trace is not None:
        return _run_traced(prog, spec, state, tables, start, step_limit, lo, hi, order, trace)
    loop = BACKENDS[backend or KERNEL]
    node, steps, offset, lo, hi, done = loop(*tables, spec.plus, spec.times, order,
                                             state.cells, state.offset, start, step_limit, lo, hi)
    state.offset = offset
    stats = BssStats(steps, lo - offset, hi - offset)
    if not done:
        raise StepLimitExceeded(f"step limit {step_limit} exceeded at node {node}", stats)
    return stats


def _run_traced(prog, spec, state, tables, node, step_limit, lo, hi, order, trace):
    steps = 0
    while True:
        if tables[0][node] == K_OUTPUT:
            break
        n2, s, off, lo, hi, done = _bss_py.run_loop(*tables, spec.plus, spec.times, order,
                                                    state.cells, state.offset, node, 1, lo, hi)
        if s == 0:
            break
        steps += 1
        state.offset = off
        trace(f"step {steps} node {node} -> {n2} offset {off} span {hi - lo + 1}")
        node = n2
        if steps >= step_limit and tables[0][node] != K_OUTPUT:
            raise StepLimitExceeded(f"step limit {step_limit} exceeded at node {node}",
                                    BssStats(steps, lo - off, hi - off))
    return BssStats(steps, lo - state.offset, hi - state.offset)


def input_state(spec: Semiring, inputs: Sequence) -> BssState:
    """g_I: ones at x_-1..x_-n, the input at x_1..x_n."""
    cells = {}
    n = len(inputs)
    for i in range(1, n + 1):
        cells[-i] = spec.one
        v = spec.check(inputs[i - 1])
        if v != spec.zero:
            cells[i] = v
    return BssState(spec, cells, 0)


def output_of(state: BssState) -> list:
    """g_O: m = number of consecutive ones from x_-1 downwards; (x_1..x_m)."""
    spec = state.spec
    m = 0
    while state.x(-(m + 1)) == spec.one:
        m += 1
    return [state.x(i) for i in range(1, m + 1)]


def bss_run(prog: BssProgram, inputs: Sequence, spec: Semiring, *, step_limit: int = 10**7,
            backend: str | None = None, trace=None, return_state: bool = False):
    """Apply g_I, run to the output node, apply g_O. Returns (output, stats)."""
    state = input_state(spec, inputs)
    stats = run_state(prog, spec, state, step_limit=step_limit, backend=backend, trace=trace)
    out = output_of(state)
    if return_state:
        return out, stats, state
    return out, stats


# ---------------------------------------------------------------------------
# Files


def program_to_doc(prog: BssProgram) -> dict:
    nodes = []
    for nd in prog.nodes:
        rec: dict[str, Any] = {"label": nd.label}
        if nd.kind in ("add", "mul", "const"):
            rec["type"] = "compute"
            rec["op"] = nd.kind
            rec["target"] = nd.target
            if nd.kind == "const":
                rec["value"] = nd.value
            else:
                rec["args"] = list(nd.args)
            rec["next"] = nd.next
        elif nd.kind == "branch":
            rec.update(type="branch", mode=nd.mode, yes=nd.yes, no=nd.no)
        elif nd.kind == "shift":
            rec.update(type="shift", direction=nd.direction, next=nd.next)
        elif nd.kind == "input":
            rec.update(type="input", next=nd.next)
        else:
            rec["type"] = "output"
        nodes.append(rec)
    doc = {"kind": "bss", "name": prog.name, "nodes": nodes}
    if prog.meta:
        doc["meta"] = prog.meta
    return doc


def program_from_doc(doc: dict) -> BssProgram:
    nodes = []
    try:
        for rec in doc["nodes"]:
            t = rec["type"]
            label = int(rec["label"])
            if t == "compute":
                op = rec["op"]
                if op not in COMPUTE_OPS:
                    raise MachineError(f"node {label}: unknown op {op!r}")
                if op == "const":
                    nodes.append(Node(label, "const", next=rec["next"], target=int(rec["target"]),
                                      value=str(rec["value"])))
                else:
                    nodes.append(Node(label, op, next=rec["next"], target=int(rec["target"]),
                                      args=tuple(int(a) for a in rec["args"])))
            elif t == "branch":
                nodes.append(Node(label, "branch", mode=rec.get("mode", "eq"), yes=rec["yes"],
                                  no=rec["no"]))
            elif t == "shift":
                nodes.append(Node(label, "shift", next=rec["next"], direction=rec["direction"]))
            elif t == "input":
                nodes.append(Node(label, "input", next=rec["next"]))
            elif t == "output":
                nodes.append(Node(label, "output"))
            else:
                raise MachineError(f"node {label}: unknown type {t!r}")
    except (KeyError, TypeError, ValueError) as exc:
        raise MachineError(f"malformed node record: {exc}") from None
    nodes.sort(key=lambda nd: nd.label)
    prog = BssProgram(tuple(nodes), doc.get("name", ""), doc.get("meta", {}))
    problems = validate_program(prog)
    if problems:
        raise MachineError("; ".join(problems))
    return prog


def load_program(path) -> BssProgram:
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise MachineError(f"{path}: invalid JSON at line {exc.lineno}: {exc.msg}") from None
    return program_from_doc(doc)


def save_program(prog: BssProgram, path) -> None:
    Path(path).write_text(json.dumps(program_to_doc(prog), indent=1) + "\n")


def spec_of_doc(doc: dict, default: Semiring | None = None) -> Semiring | None:
    name = doc.get("semiring")
    return get_semiring(name) if name else default
