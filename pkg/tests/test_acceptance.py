"""Acceptance suite: one check per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v`` or directly with
``python3 tests/test_acceptance.py``.
"""

import itertools
import math
import random
import sys
import time
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

from oracles import all_structures, classical, count_nodes, random_formula, random_interpretation  # noqa: E402
from semiring_fo import NATURAL, SEMIRINGS, TROPICAL  # noqa: E402
from semiring_fo.circuits import (  # noqa: E402
    INPUT,
    evaluate_circuit,
    input_path_lengths,
    is_tree_normal,
    measure,
    normalize_to_tree,
    random_circuit,
)
from semiring_fo.compiler import circuit_to_formula, formula_circuit_size, formula_to_circuit  # noqa: E402
from semiring_fo.logic import (  # noqa: E402
    And,
    Compare,
    Exists,
    Forall,
    Interpretation,
    Or,
    Vocabulary,
    call_bound,
    canonical_boolean,
    decode_universe_size,
    eliminate_comparisons_boolean,
    encode_interpretation,
    encoding_length,
    evaluate,
    parse_formula,
    value_of,
    xi_interpretation,
)
from semiring_fo.machines import (  # noqa: E402
    FIXTURE_KTMS,
    bss_run,
    fixture_ktm,
    gap_init,
    input_state,
    ktm_run,
    ktm_to_bss,
    run_state,
)
from semiring_fo.semiring import random_element  # noqa: E402

PE = Vocabulary.of({"P": 1, "E": 2})
ALL_COMPARISONS = ("=", "!=", "<=", "!<=")


def report(k, ok, detail):
    line = f"{'PASS' if ok else 'FAIL'} criterion {k}: {detail}"
    capture = getattr(report, "capsys", None)
    if capture is not None:
        with capture.disabled():
            print("\n" + line)
    else:
        print(line)
    return ok


@pytest.fixture(autouse=True)
def _visible_report(capsys):
    report.capsys = capsys
    yield
    report.capsys = None


# ---------------------------------------------------------------------------


def criterion_1():
    t0 = time.perf_counter()
    vocab = Vocabulary.of({"P": 1, "Q": 1})

    def pi_with(q):
        return Interpretation.from_function(
            NATURAL, ["1", "2", "3"], vocab,
            lambda neg, rel, args: 0 if neg else (1 if rel == "P" else q))

    phi = parse_formula("forall x. P(x) = forall x. Q(x)", vocab)
    a = value_of(phi, pi_with(1))
    b = value_of(phi, pi_with(2))
    c = value_of(parse_formula("forall x. Q(x)", vocab), pi_with(2))
    took = time.perf_counter() - t0
    ok = (a, b, c) == (1, 0, 8) and c == 2 ** 3 and took < 1
    return ok, f"values {a}, {b}; product {c} = 2^3; {took:.3f} s"


def criterion_2():
    t0 = time.perf_counter()
    rng = random.Random(2)
    formulas = []
    while len(formulas) < 150:
        phi = random_formula(rng, PE, ["x", "y"], rng.randint(1, 3))
        if phi not in formulas:
            formulas.append(phi)
    checked = mismatches = 0
    for n in (1, 2, 3):
        universe = [str(i) for i in range(1, n + 1)]
        for rels in all_structures(universe, PE):
            pi = canonical_boolean(universe, PE, rels)
            for phi in formulas:
                checked += 1
                got = value_of(phi, pi, short_circuit=True)
                if bool(got) != classical(phi, universe, rels, {}):
                    mismatches += 1
    took = time.perf_counter() - t0
    ok = mismatches == 0 and took < 60
    return ok, f"{checked} (structure, formula) pairs, {mismatches} mismatches, {took:.1f} s"


def criterion_3():
    rng = random.Random(3)
    positive = [s for s in SEMIRINGS.values() if s.positive]
    mismatches = 0
    for spec in positive:
        for _ in range(500):
            phi = random_formula(rng, PE, ["x", "y"], rng.randint(1, 3))
            pi = random_interpretation(rng, spec, PE, rng.randint(1, 3))
            if spec.is_zero(value_of(phi, pi)) != (not value_of(phi, xi_interpretation(pi))):
                mismatches += 1
    names = ", ".join(s.name for s in positive)
    return mismatches == 0, f"500 pairs each over {names}; {mismatches} mismatches"


def one_comparison_formula(rng):
    while True:
        phi = random_formula(rng, PE, ["x", "y"], 3, comparisons=ALL_COMPARISONS)
        if count_nodes(phi, Compare) == 1:
            return phi


def random_structure(rng, n):
    universe = [str(i) for i in range(1, n + 1)]
    rels = {rel: {t for t in itertools.product(universe, repeat=ar) if rng.random() < 0.45}
            for rel, ar in PE.relations}
    return universe, rels


def criterion_4():
    rng = random.Random(4)
    mismatches = 0
    for _ in range(200):
        phi = one_comparison_formula(rng)
        universe, rels = random_structure(rng, rng.randint(1, 3))
        pi = canonical_boolean(universe, PE, rels)
        if value_of(eliminate_comparisons_boolean(phi), pi) != value_of(phi, pi):
            mismatches += 1
    return mismatches == 0, f"200 formulas on model-defining Boolean structures; {mismatches} mismatches"


def criterion_5():
    rng = random.Random(5)
    mismatches = size_errors = depth_errors = 0
    for _ in range(100):
        phi = random_formula(rng, PE, ["x", "y"], rng.randint(1, 3), comparisons=ALL_COMPARISONS)
        for spec in (NATURAL, TROPICAL):
            for n in (1, 2, 3):
                pi = random_interpretation(rng, spec, PE, n)
                c = formula_to_circuit(phi, PE, n, spec)
                if evaluate_circuit(c, encode_interpretation(pi)) != [value_of(phi, pi)]:
                    mismatches += 1
        depths = set()
        for n in range(1, 7):
            size, depth = measure(formula_to_circuit(phi, PE, n, NATURAL))
            depths.add(depth)
            size_errors += size != formula_circuit_size(phi, PE, n)
        depth_errors += len(depths) != 1
    ok = mismatches == size_errors == depth_errors == 0
    return ok, (f"600 evaluations, {mismatches} mismatches; size count off {size_errors} times; "
                f"depth varied for {depth_errors} sentences")


def small_normalized_circuits(spec, rng, count):
    out = []
    while len(out) < count:
        c = normalize_to_tree(random_circuit(spec, rng, n_inputs=rng.randint(1, 3), max_size=10,
                                             max_depth=2))
        size, depth = measure(c)
        if size <= 12 and depth <= 3:
            out.append(c)
    return out


def criterion_6():
    rng = random.Random(6)
    mismatches = 0
    for spec in (NATURAL, TROPICAL):
        for c in small_normalized_circuits(spec, rng, 50):
            compiled = circuit_to_formula(c)
            for _ in range(20):
                xs = [random_element(spec, rng) for _ in c.inputs]
                got = value_of(compiled.formula, compiled.interpretation(xs), compiled.builtins,
                               short_circuit=True)
                if got != evaluate_circuit(c, xs)[0]:
                    mismatches += 1
    return mismatches == 0, f"50 circuits x 20 inputs over natural and tropical; {mismatches} mismatches"


def criterion_7():
    rng = random.Random(7)
    mismatches = structural = 0
    for spec in (NATURAL, TROPICAL):
        for _ in range(50):
            c = random_circuit(spec, rng, n_inputs=rng.randint(1, 4), max_size=12, max_depth=3)
            t = normalize_to_tree(c)
            succ = t.successors()
            fan_out = all(len(succ.get(g.id, ())) <= 1 for g in t.gates if g.type != INPUT)
            uniform = all(len(ls) <= 1 for ls in input_path_lengths(t).values())
            if not (fan_out and uniform and is_tree_normal(t) and measure(t)[1] == measure(c)[1]):
                structural += 1
            for _ in range(20):
                xs = [random_element(spec, rng) for _ in c.inputs]
                if evaluate_circuit(t, xs) != evaluate_circuit(c, xs):
                    mismatches += 1
    ok = mismatches == structural == 0
    return ok, f"50 circuits x 20 inputs per semiring; {mismatches} output and {structural} structural failures"


def criterion_8():
    rng = random.Random(8)
    steps = {"forward": {}, "reverse": {}}
    identity = True
    for n in (4, 8, 16, 32):
        xs = [random_element(NATURAL, rng) for _ in range(n)]
        state = input_state(NATURAL, xs)
        before = dict(state.cells)
        steps["forward"][n] = run_state(gap_init("forward"), NATURAL, state).steps
        steps["reverse"][n] = run_state(gap_init("reverse"), NATURAL, state).steps
        identity &= state.offset == 0 and state.cells == before
    ratios = [steps[d][2 * n] / steps[d][n] for d in steps for n in (8, 16)]
    ok = identity and max(ratios) <= 4.5
    return ok, f"round trip identity {identity}; worst steps(2n)/steps(n) = {max(ratios):.3f}"


def criterion_9():
    rng = random.Random(9)
    mismatches = bound_failures = 0
    for name in FIXTURE_KTMS:
        p = fixture_ktm(name)
        for spec in (NATURAL, TROPICAL):
            prog = ktm_to_bss(p, spec)
            c = prog.meta["c"]
            for _ in range(20):
                xs = [random_element(spec, rng) for _ in range(rng.randint(0, 6))]
                want, kstats = ktm_run(p, xs, spec)
                got, bstats = bss_run(prog, xs, spec)
                mismatches += got != want
                bound_failures += bstats.steps > c * (kstats.steps + len(xs) ** 2 + len(want) ** 2 + 1)
    ok = mismatches == bound_failures == 0
    return ok, (f"{len(FIXTURE_KTMS)} machines x 20 inputs x 2 semirings; {mismatches} mismatches, "
                f"{bound_failures} step bound violations")


def criterion_10():
    rng = random.Random(10)
    violations = formula_disagreements = 0
    for _ in range(100):
        phi = random_formula(rng, PE, ["x", "y"], rng.randint(1, 4))
        n = rng.randint(1, 4)
        _, stats = evaluate(phi, random_interpretation(rng, NATURAL, PE, n))
        bound = (2 * count_nodes(phi, (And, Or)) + 1) * n ** count_nodes(phi, (Exists, Forall))
        formula_disagreements += bound != call_bound(phi, n)
        violations += stats.calls > bound
    ok = violations == formula_disagreements == 0
    return ok, f"100 formulas; {violations} bound violations"


def criterion_11():
    failures = checked = 0
    for size in (1, 2, 3):
        for arities in itertools.product(range(4), repeat=size):
            vocab = Vocabulary.of({f"R{i}": a for i, a in enumerate(arities)})
            for n in range(0, 21):
                length = encoding_length(vocab, n)
                got, probes = decode_universe_size(length, vocab, with_probes=True)
                allowed = math.ceil(math.log2(length + 2))
                checked += 1
                failures += got != n or probes > allowed
    return failures == 0, f"{checked} (vocabulary, size) pairs; {failures} failures"


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6,
            criterion_7, criterion_8, criterion_9, criterion_10, criterion_11]


@pytest.mark.parametrize("k", range(1, len(CRITERIA) + 1))
def test_criterion(k):
    ok, detail = CRITERIA[k - 1]()
    assert report(k, ok, detail), detail


if __name__ == "__main__":
    results = [report(k, *check()) for k, check in enumerate(CRITERIA, 1)]
    sys.exit(0 if all(results) else 1)
