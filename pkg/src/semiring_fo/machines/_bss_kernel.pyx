# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled BSS execution loop; mirrors _bss_py.run_loop exactly."""

cdef enum:
    K_INPUT = 0
    K_OUTPUT = 1
    K_ADD = 2
    K_MUL = 3
    K_CONST = 4
    K_BEQ = 5
    K_BLEQ = 6
    K_SHL = 7
    K_SHR = 8


def run_loop(kind, tgt, arg1, arg2, nxt, nxt2, consts, plus, times, leq,
             dict cells, long long offset, long long node, long long step_limit,
             long long lo, long long hi):
    cdef long long n = len(kind)
    cdef long long[:] kd = _arr(kind)
    cdef long long[:] tg = _arr(tgt)
    cdef long long[:] a1 = _arr(arg1)
    cdef long long[:] a2 = _arr(arg2)
    cdef long long[:] nx = _arr(nxt)
    cdef long long[:] nx2 = _arr(nxt2)
    cdef long long steps = 0
    cdef long long k, t, a, b
    zero = consts[0]
    while True:
        k = kd[node]
        if k == K_OUTPUT:
            return node, steps, offset, lo, hi, True
        if steps >= step_limit:
            return node, steps, offset, lo, hi, False
        steps += 1
        if k == K_ADD or k == K_MUL or k == K_CONST:
            t = tg[node] + offset
            if k == K_CONST:
                v = consts[a1[node]]
            else:
                a = a1[node] + offset
                b = a2[node] + offset
                if a < lo:
                    lo = a
                if a > hi:
                    hi = a
                if b < lo:
                    lo = b
                if b > hi:
                    hi = b
                va = cells.get(a, zero)
                vb = cells.get(b, zero)
                v = plus(va, vb) if k == K_ADD else times(va, vb)
            if v == zero:
                cells.pop(t, None)
            else:
                cells[t] = v
            if t < lo:
                lo = t
            if t > hi:
                hi = t
            node = nx[node]
        elif k == K_BEQ or k == K_BLEQ:
            a = 1 + offset
            b = 2 + offset
            if a < lo:
                lo = a
            if b > hi:
                hi = b
            va = cells.get(a, zero)
            vb = cells.get(b, zero)
            if k == K_BEQ:
                yes = va == vb
            else:
                yes = leq(va, vb)
            node = nx[node] if yes else nx2[node]
        elif k == K_SHL:
            offset += 1
            node = nx[node]
        elif k == K_SHR:
            offset -= 1
            node = nx[node]
        else:
            node = nx[node]


cdef long long[:] _arr(seq):
    import array
    return array.array("q", seq)
