"""Compare the pure-Python and compiled BSS interpreter loops.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Workloads: gap normal form initialization on growing inputs, and a compiled
K-Turing machine.  Outputs are checked for agreement before timing.
"""

import argparse
import random
import timeit

from semiring_fo import NATURAL, TROPICAL
from semiring_fo.machines import KERNEL, bss_run, fixture_ktm, gap_init, ktm_to_bss
from semiring_fo.semiring import random_element


def workloads(rng):
    for n in (16, 64, 128):
        yield f"gap_init forward n={n}", gap_init("forward"), \
            [random_element(NATURAL, rng) for _ in range(n)], NATURAL
    for name in ("register_multiply", "threshold"):
        prog = ktm_to_bss(fixture_ktm(name), TROPICAL)
        yield f"ktm {name} n=6", prog, [random_element(TROPICAL, rng) for _ in range(6)], TROPICAL


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if KERNEL != "cython":
        print("compiled kernel not available; timing the Python loop twice")
    rng = random.Random(0)
    print(f"{'workload':28} {'steps':>9} {'python ms':>10} {'cython ms':>10} {'speedup':>8}")
    for label, prog, xs, spec in workloads(rng):
        ref, stats = bss_run(prog, xs, spec, backend="python")
        assert bss_run(prog, xs, spec, backend="cython")[0] == ref
        times = {}
        for backend in ("python", "cython"):
            t = timeit.repeat(lambda: bss_run(prog, xs, spec, backend=backend),
                              number=1, repeat=args.repeat)
            times[backend] = min(t) * 1000
        print(f"{label:28} {stats.steps:>9} {times['python']:>10.2f} {times['cython']:>10.2f} "
              f"{times['python'] / times['cython']:>7.2f}x")


if __name__ == "__main__":
    main()
