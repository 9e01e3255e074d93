"""Pure-Python BSS execution loop; same contract as the compiled kernel."""

# node kind codes shared with _bss_kernel.pyx
K_INPUT, K_OUTPUT, K_ADD, K_MUL, K_CONST, K_BEQ, K_BLEQ, K_SHL, K_SHR = range(9)


def run_loop(kind, tgt, arg1, arg2, nxt, nxt2, consts, plus, times, leq,
             cells, offset, node, step_limit, lo, hi):
    """Run from ``node`` until the output node.

    ``cells`` is the sparse absolute-coordinate map (mutated in place); x_i
    lives at ``cells[i + offset]``. Returns (node, steps, offset, lo, hi,
    finished); ``finished`` is False when the step limit cut the run short.
    """
    steps = 0
    get = cells.get
    while True:
        k = kind[node]
        if k == K_OUTPUT:
            return node, steps, offset, lo, hi, True
        if steps >= step_limit:
            return node, steps, offset, lo, hi, False
        steps += 1
        if k == K_ADD or k == K_MUL or k == K_CONST:
            t = tgt[node] + offset
            if k == K_CONST:
                v = consts[arg1[node]]
            else:
                a = arg1[node] + offset
                b = arg2[node] + offset
                if a < lo:
                    lo = a
                if a > hi:
                    hi = a
                if b < lo:
                    lo = b
                if b > hi:
                    hi = b
                va = get(a, consts[0])
                vb = get(b, consts[0])
                v = plus(va, vb) if k == K_ADD else times(va, vb)
            if v == consts[0]:
                cells.pop(t, None)
            else:
                cells[t] = v
            if t < lo:
                lo = t
            if t > hi:
                hi = t
            node = nxt[node]
        elif k == K_BEQ or k == K_BLEQ:
            a = 1 + offset
            b = 2 + offset
            if a < lo:
                lo = a
            if b > hi:
                hi = b
            va = get(a, consts[0])
            vb = get(b, consts[0])
            yes = (va == vb) if k == K_BEQ else leq(va, vb)
            node = nxt[node] if yes else nxt2[node]
        elif k == K_SHL:
            offset += 1
            node = nxt[node]
        elif k == K_SHR:
            offset -= 1
            node = nxt[node]
        else:  # K_INPUT
            node = nxt[node]
