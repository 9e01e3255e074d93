"""Compile a K-Turing machine into a BSS program computing the same function.

Tape cells become blocks of W = 2k + 2 state coordinates, k = l + |R| + 1,
l = max(1, ⌈log₂|Γ|⌉). Offsets inside a block:

    0, 1          scratch, zero at rest (they are x_1, x_2 at the head block,
                  so every test happens in place)
    2, 3          type: (0,0) blank, (0,1) other Γ symbol, (1,1) K value,
                  (1,0) tape-end sentinel
    4, 5          slot 1: (a, 1) for a K value, (bit, 1) for a Γ code bit;
                  for a sentinel the first cell is 0 (left) or 1 (right)
    6 .. 2l+3     code bits 2..l as (bit, 1)
    last 2|R|     registers as (r, 1), only in the head block

A machine without registers gets one unused register so that the last cell
of every non-head block is a known zero.

Phase 1 brings the input into gap form, then widens every pair into a block
(the tail is pushed right by W-2 cells per pair) and puts sentinels at both
ends. Phase 2 simulates δ one block-step at a time. Phase 3 wipes everything
but the output blocks, squeezes those back into pairs and undoes the gap form.
"""

from __future__ import annotations

import math
from fractions import Fraction

from ..semiring import Semiring
from .bss import Asm, BssProgram, MachineError
from .gapinit import FORWARD_STEPS, REVERSE_STEPS, gap_init
from .ktm import KtmProgram, check_ktm

RIGHT, LEFT = "l", "r"  # shift directions that move the machine's position


class Layout:
    def __init__(self, p: KtmProgram):
        if not p.alphabet:
            raise MachineError("tape alphabet is empty")
        self.l = max(1, math.ceil(math.log2(len(p.alphabet))))
        self.registers = list(p.registers) or ["_pad"]
        self.k = self.l + len(self.registers) + 1
        self.W = 2 * self.k + 2
        self.symbols = [s for s in p.alphabet if s != p.blank]
        self.code = {s: i for i, s in enumerate(self.symbols)}

    # coordinates relative to the block start at x_1
    def V(self, slot: int) -> int:
        return 3 + 2 * slot

    def M(self, slot: int) -> int:
        return 4 + 2 * slot

    def reg(self, r: str) -> tuple[int, int]:
        slot = self.l + 1 + self.registers.index(r)
        return self.V(slot), self.M(slot)

    def bit(self, symbol: str, j: int) -> int:
        return (self.code[symbol] >> (j - 1)) & 1


class _Emitter:
    def __init__(self, p: KtmProgram, name: str):
        self.p = p
        self.L = Layout(p)
        self.a = Asm(name)
        self.action_cost = 0

    # -- primitives --------------------------------------------------------
    def test(self, coord: int, value: str, yes: str, no: str) -> None:
        """Branch on x_coord == value using the scratch cells (6 steps)."""
        a = self.a
        a.copy(1, coord)
        a.const(2, value)
        ly, ln = a.fresh("ty"), a.fresh("tn")
        a.branch("eq", yes=ly, no=ln)
        a.mark(ly)
        a.const(1)
        a.const(2)
        a.goto(yes)
        a.mark(ln)
        a.const(1)
        a.const(2)
        a.goto(no)

    def move(self, direction: str, times: int) -> None:
        self.a.shift(direction, times)

    def zero_block(self) -> None:
        for c in range(3, self.L.W + 1):
            self.a.const(c)

    def inline(self, prog: BssProgram, prefix: str, exit_label: str) -> None:
        a = self.a
        lab = lambda i: exit_label if prog.node(i).kind == "output" else f"{prefix}{i}"
        a.goto(lab(prog.node(1).next))
        for nd in prog.nodes:
            if nd.kind in ("input", "output"):
                continue
            a.mark(f"{prefix}{nd.label}")
            if nd.kind == "branch":
                a.branch(nd.mode, yes=lab(nd.yes), no=lab(nd.no))
                continue
            if nd.kind == "shift":
                a.shift(nd.direction)
            elif nd.kind == "const":
                a.const(nd.target, nd.value)
            elif nd.kind == "add":
                a.add(nd.target, *nd.args)
            elif nd.kind == "mul":
                a.mul(nd.target, *nd.args)
            a.goto(lab(nd.next))

    # -- phase 1 -----------------------------------------------------------
    def phase1(self) -> None:
        a, W = self.a, self.L.W
        self.inline(gap_init("forward"), "gf", "p1_loop")
        # at pair i: x_1 value, x_2 marker (1, or 0 past the end); x_0 is a known 0
        a.mark("p1_loop")
        a.copy(0, 1)
        a.const(1, "one")
        a.branch("eq", yes="p1_exists", no="p1_end")
        a.mark("p1_exists")
        a.copy(1, 0)
        a.const(0)
        a.const(2)  # tag this pair
        # first step right: x_0 is the tagged marker (0)
        self.move(RIGHT, 2)
        a.copy(0, 1)
        a.const(1, "one")
        a.branch("eq", yes="p1_w1_yes", no="p1_w1_no")
        a.mark("p1_w1_no")
        a.copy(1, 0)
        a.const(0)
        self.move(LEFT, 2)
        a.goto("p1_convert")
        a.mark("p1_w1_yes")
        a.copy(1, 0)
        a.const(0)
        # further steps: x_0 is an untagged marker (1)
        a.mark("p1_walk")
        self.move(RIGHT, 2)
        a.copy(0, 1)
        a.const(1, "one")
        a.branch("eq", yes="p1_w_yes", no="p1_w_no")
        a.mark("p1_w_yes")
        a.copy(1, 0)
        a.const(0, "one")
        a.goto("p1_walk")
        a.mark("p1_w_no")
        a.copy(1, 0)
        a.const(0, "one")
        self.move(LEFT, 2)
        # push pairs right by W-2, last one first, until the tagged pair
        a.mark("p1_move")
        a.copy(W - 1, 1)
        a.copy(W, 2)
        a.const(1)
        a.const(2)
        self.move(LEFT, 2)
        a.copy(3, 1)
        a.const(1, "one")
        a.branch("eq", yes="p1_m_more", no="p1_m_done")
        a.mark("p1_m_more")
        a.copy(1, 3)
        a.const(3)
        a.goto("p1_move")
        a.mark("p1_m_done")
        a.copy(1, 3)
        a.const(3)
        # widen the tagged pair into a K block
        a.mark("p1_convert")
        a.copy(5, 1)
        a.const(6, "one")
        a.const(3, "one")
        a.const(4, "one")
        a.const(1)
        self.move(RIGHT, W)
        a.goto("p1_loop")
        # past the last pair: right sentinel here, left sentinel at block 0
        a.mark("p1_end")
        a.copy(1, 0)
        a.const(0)
        a.const(3, "one")
        a.const(5, "one")
        a.mark("p1_back")
        self.move(LEFT, W)
        self.test(3, "one", "p1_back", "p1_at0")
        a.mark("p1_at0")
        a.const(3, "one")
        self.move(RIGHT, W)
        for r in self.L.registers:
            a.const(self.L.reg(r)[1], "one")
        a.goto(f"d:{self.p.initial}")

    # -- phase 2 -----------------------------------------------------------
    def dispatch(self, q: str) -> None:
        a, Lay, W = self.a, self.L, self.L.W
        p = self.p
        a.mark(f"d:{q}")
        self.test(3, "one", f"d1:{q}", f"d0:{q}")
        a.mark(f"d1:{q}")
        self.test(4, "one", f"k:{q}", f"s:{q}")
        a.mark(f"d0:{q}")
        self.test(4, "one", f"g:{q}", f"b:{q}")
        # sentinel under the head: push it one block outwards, read a blank
        a.mark(f"s:{q}")
        self.test(5, "one", f"sr:{q}", f"sl:{q}")
        a.mark(f"sr:{q}")
        a.const(3 + W, "one")
        a.const(5 + W, "one")
        a.const(3)
        a.const(5)
        a.goto(f"b:{q}")
        a.mark(f"sl:{q}")
        a.const(3 - W, "one")
        a.const(3)
        a.goto(f"b:{q}")
        a.mark(f"b:{q}")
        self.action(q, p.blank)
        # other Γ symbols: binary search over the code bits
        a.mark(f"g:{q}")
        self._decode(q, Lay.l, 0)
        # K value
        a.mark(f"k:{q}")
        if q not in p.predicate:
            a.goto("p3")
        else:
            op, r = p.predicate[q]
            a.copy(1, 5)
            a.copy(2, Lay.reg(r)[0])
            ly, ln = a.fresh("ky"), a.fresh("kn")
            a.branch("eq" if op in ("=", "!=") else "leq", yes=ly, no=ln)
            positive = op in ("=", "<=")
            for lab, outcome in ((ly, positive), (ln, not positive)):
                a.mark(lab)
                a.const(1)
                a.const(2)
                a.goto(f"kv:{q}:{outcome}")
            for outcome in (True, False):
                a.mark(f"kv:{q}:{outcome}")
                self.action(q, outcome)

    def _decode(self, q: str, j: int, prefix: int) -> None:
        a, Lay = self.a, self.L
        if j == 0:
            if prefix < len(Lay.symbols):
                self.action(q, Lay.symbols[prefix])
            else:
                a.goto("p3")
            return
        one, zero = a.fresh("g1"), a.fresh("g0")
        self.test(Lay.V(j), "one", one, zero)
        a.mark(one)
        self._decode(q, j - 1, prefix | (1 << (j - 1)))
        a.mark(zero)
        self._decode(q, j - 1, prefix)

    def action(self, q: str, read) -> None:
        """Straight-line code for δ(q, read), ending in a jump."""
        a, Lay, W = self.a, self.L, self.L.W
        t = self.p.transitions.get((q, read))
        on_k = isinstance(read, bool)
        if t is None or (not on_k and (t.assign or t.write.kind == "op")):
            a.goto("p3")
            return
        start = a.here
        if t.assign:
            a.copy(1, 5)
        w = t.write
        if w.kind == "symbol":
            if w.symbol == self.p.blank:
                a.const(3)
                a.const(4)
                for j in range(1, Lay.l + 1):
                    a.const(Lay.V(j))
                    a.const(Lay.M(j))
            else:
                a.const(3)
                a.const(4, "one")
                for j in range(1, Lay.l + 1):
                    a.const(Lay.V(j), "one" if Lay.bit(w.symbol, j) else "zero")
                    a.const(Lay.M(j), "one")
        elif w.kind == "value":
            a.const(3, "one")
            a.const(4, "one")
            a.const(5, w.value)
            a.const(6, "one")
            for j in range(2, Lay.l + 1):
                a.const(Lay.V(j))
                a.const(Lay.M(j))
        elif w.kind == "op":
            (a.add if w.op == "+" else a.mul)(5, 5, Lay.reg(w.register)[0])
        for r in t.assign:
            a.copy(Lay.reg(r)[0], 1)
        if t.assign:
            a.const(1)
        if t.move in ("L", "R"):
            d = W if t.move == "R" else -W
            for r in Lay.registers:
                v, m = Lay.reg(r)
                a.copy(v + d, v)
                a.const(m + d, "one")
                a.const(v)
                a.const(m)
            self.move(RIGHT if t.move == "R" else LEFT, W)
        self.action_cost = max(self.action_cost, a.here - start)
        a.goto(f"d:{t.next}")

    # -- phase 3 -----------------------------------------------------------
    def phase3(self) -> None:
        a, Lay, W = self.a, self.L, self.L.W
        a.mark("p3")
        for r in Lay.registers:
            v, m = Lay.reg(r)
            a.const(v)
            a.const(m)
        self.test(3, "one", "p3_t1", "p3_empty")
        a.mark("p3_t1")
        self.test(4, "one", "c_left", "p3_empty")

        # no output: find the left sentinel, then wipe everything up to the right one
        a.mark("p3_empty")
        a.mark("e_left")
        self.move(LEFT, W)
        self.test(3, "one", "e_l1", "e_left")
        a.mark("e_l1")
        self.test(4, "one", "e_left", "e_sent")
        a.mark("e_sent")
        a.const(3)
        a.mark("e_right")
        self.move(RIGHT, W)
        self.test(3, "one", "e_r1", "e_rz")
        a.mark("e_r1")
        self.test(4, "one", "e_rz", "e_rend")
        a.mark("e_rz")
        self.zero_block()
        a.goto("e_right")
        a.mark("e_rend")
        self.zero_block()
        a.halt()

        # output present: wipe left of the head block, including the sentinel
        a.mark("c_left")
        self.move(LEFT, W)
        self.test(3, "one", "c_l1", "c_lz")
        a.mark("c_l1")
        self.test(4, "one", "c_lz", "c_lend")
        a.mark("c_lz")
        self.zero_block()
        a.goto("c_left")
        a.mark("c_lend")
        self.zero_block()
        # back to the head block: the first block whose type marker is 1
        a.mark("c_back")
        self.move(RIGHT, W)
        self.test(4, "one", "c_out", "c_back")
        # step over the K blocks of the output
        a.mark("c_out")
        self.move(RIGHT, W)
        self.test(3, "one", "c_o1", "c_right")
        a.mark("c_o1")
        self.test(4, "one", "c_out", "c_right")
        # wipe from the first non-K block through the right sentinel
        a.mark("c_right")
        self.test(3, "one", "c_r1", "c_rz")
        a.mark("c_r1")
        self.test(4, "one", "c_rz", "c_rend")
        a.mark("c_rz")
        self.zero_block()
        self.move(RIGHT, W)
        a.goto("c_right")
        a.mark("c_rend")
        self.zero_block()
        # return to the block after the output and mark it
        a.mark("c_ret")
        self.move(LEFT, W)
        self.test(4, "one", "c_ret1", "c_ret")
        a.mark("c_ret1")
        self.move(RIGHT, W)
        a.const(3, "one")
        a.mark("c_toh")
        self.move(LEFT, W)
        self.test(4, "one", "c_toh", "c_toh1")
        a.mark("c_toh1")
        self.move(RIGHT, W)

        # squeeze: block j becomes the pair (o_j, 1); the tail moves left by W-2
        a.mark("z_loop")
        self.test(4, "one", "z_conv", "z_done")
        a.mark("z_conv")
        a.copy(1, 5)
        a.const(2, "one")
        self.zero_block()
        self.move(RIGHT, W)
        a.mark("z_mv")
        self.test(3, "one", "z_mvblk", "z_back0")
        a.mark("z_mvblk")
        for o in range(2, W):
            a.copy(1 + o - (W - 2), 1 + o)
            a.const(1 + o)
        self.move(RIGHT, W)
        a.goto("z_mv")
        a.mark("z_back0")
        self.move(LEFT, W - 2)
        a.mark("z_back")
        self.move(LEFT, W)
        self.test(0, "one", "z_loop", "z_back")
        a.mark("z_done")
        a.const(3)
        # walk to the first pair, sliding each pair right by two on the way
        a.mark("s_loop")
        self.test(0, "one", "s_swap", "s_done")
        a.mark("s_swap")
        a.copy(1, -1)
        a.copy(2, 0)
        a.const(-1)
        a.const(0)
        self.move(LEFT, 2)
        a.goto("s_loop")
        a.mark("s_done")
        self.move(RIGHT, 2)
        self.inline(gap_init("reverse"), "gr", "__halt__")


def ktm_to_bss(p: KtmProgram, spec: Semiring | None = None) -> BssProgram:
    """BSS program with the same input/output function as ``p``.

    The output of the compiled program is the run of K cells starting at the
    head; it matches ``ktm_run`` whenever that output holds no Γ symbols.
    The constant ``c`` of the time bound is stored in ``program.meta``.
    """
    check_ktm(p)
    if spec is not None:
        needs_order = any(op in ("<=", "!<=") for op, _ in p.predicate.values())
        if needs_order and not spec.ordered:
            raise MachineError(f"order comparisons need an ordered semiring; {spec.name} is not")
    em = _Emitter(p, f"compiled:{p.name}" if p.name else "compiled")
    em.phase1()
    p2 = em.a.here + 1
    for q in p.states:
        em.dispatch(q)
    p3 = em.a.here + 1
    em.phase3()
    bound = time_constant(em.L, em.action_cost)
    meta = {"source": p.name, "W": em.L.W, "k": em.L.k, "l": em.L.l,
            "registers": em.L.registers, "c": bound["c"], "bound": bound,
            "phase_starts": [1, p2, p3]}
    return em.a.assemble(meta)


def phase1_widening(Lay: Layout) -> tuple[int, int, int]:
    """Coefficients of the exact step count of the widening part of phase 1."""
    W, R = Lay.W, len(Lay.registers)
    return 12, 19 + 2 * W, 16 + 2 * W + R


def phase1_steps(Lay: Layout, n: int) -> int:
    from .gapinit import predicted_steps

    e2, e1, e0 = phase1_widening(Lay)
    return predicted_steps("forward", n) + e2 * n * n + e1 * n + e0


def time_constant(Lay: Layout, action_cost: int) -> dict:
    """A c with steps <= c (t + n² + m² + 1), n input length, m output length.

    Counts below follow the emitted code: a test costs 6, a copy 2, every
    const/branch/shift 1. L, the number of blocks between the sentinels,
    is at most n + t + 2 because each simulated step adds at most one block.
    """
    W, l, R = Lay.W, Lay.l, len(Lay.registers)
    # phase 1: gap form (without its input node) plus widening, exact for n >= 1
    fa, fb, fc = FORWARD_STEPS
    e2, e1, e0 = phase1_widening(Lay)
    # phase 2: one simulated step
    c_step = 12 + max(10, 6 * l, 7) + action_cost
    # phase 3: per-block cost of all linear sweeps, and the quadratic squeeze
    c_lin = 8 * W + 50
    ra, rb, rc = REVERSE_STEPS
    q2 = Fraction(5 * W + 6, 2) + ra
    q1 = 3 * W + 11 + Fraction(5 * W + 6, 2) + 14 + rb
    q0 = 2 * R + 12 + 2 * W + 1 + 6 + 9 + rc
    coeff_t = c_step + c_lin
    coeff_n2 = fa + e2 + fb + e1 + c_lin
    coeff_m2 = q2 + q1
    coeff_1 = fc + e0 + c_step + 2 * c_lin + q0
    c = math.ceil(max(coeff_t, coeff_n2, coeff_m2, coeff_1))
    return {"c": c, "c_step": c_step, "c_linear": c_lin,
            "t": str(coeff_t), "n2": str(coeff_n2), "m2": str(coeff_m2), "one": str(coeff_1)}
