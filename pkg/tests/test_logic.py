import itertools
import json
import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import classical, random_formula, random_interpretation, table_value
from semiring_fo import BOOLEAN, INF, NATURAL, POLYNOMIAL, PROBABILITY, TROPICAL
from semiring_fo.logic import (
    And,
    Atom,
    BuiltinAtom,
    BuiltinInterpretation,
    Compare,
    DecodeError,
    EvaluationError,
    Exists,
    Forall,
    Interpretation,
    InterpretationError,
    Or,
    ParseError,
    VarEq,
    Vocabulary,
    call_bound,
    canonical_boolean,
    decode_interpretation,
    decode_universe_size,
    eliminate_comparisons_boolean,
    encode_interpretation,
    encoding_length,
    evaluate,
    indicator_symbol,
    is_model_defining,
    literal_position,
    nnf_negate,
    parse_formula,
    strict_violations,
    to_text,
    value_of,
    xi_interpretation,
)
from semiring_fo.logic.files import (
    FileFormatError,
    builtins_to_doc,
    interpretation_to_doc,
    load_builtins,
    load_interpretation,
)

PQ = Vocabulary.of({"P": 1, "Q": 1})
E2 = Vocabulary.of({"E": 2})


def pq(spec, n, p, q):
    universe = [str(i) for i in range(1, n + 1)]
    return Interpretation.from_function(
        spec, universe, PQ, lambda neg, rel, args: spec.zero if neg else (p if rel == "P" else q))


# ---------------------------------------------------------------------------
# parsing


def test_parse_exists():
    assert parse_formula("exists x. P(x)", PQ) == Exists("x", Atom("P", ("x",)))


def test_parse_comparison_of_quantified_formulas():
    phi = parse_formula("forall x. P(x) = forall x. Q(x)", PQ)
    assert phi == Compare("=", Forall("x", Atom("P", ("x",))), Forall("x", Atom("Q", ("x",))))


def test_parse_precedence_and_binds_tighter_than_or():
    phi = parse_formula("exists x. P(x) | Q(x) & ~P(x)", PQ)
    assert phi == Exists("x", Or(Atom("P", ("x",)), And(Atom("Q", ("x",)), Atom("P", ("x",), True))))


def test_parse_variable_equalities():
    phi = parse_formula("forall x, y. x = y | x != y", PQ)
    assert phi == Forall("x", Forall("y", Or(VarEq("x", "y"), VarEq("x", "y", True))))


def test_parse_error_has_position():
    with pytest.raises(ParseError) as info:
        parse_formula("exists x. P(x", PQ)
    assert "line 1, column" in str(info.value)


def test_parse_rejects_unknown_symbol_and_bad_arity():
    with pytest.raises(Exception, match="unknown|Z"):
        parse_formula("exists x. Z(x)", PQ)
    with pytest.raises(ParseError, match="arity"):
        parse_formula("exists x. P(x, x)", PQ)


def test_pretty_printer_round_trips_random_formulas():
    rng = random.Random(3)
    vocab = Vocabulary.of({"P": 1, "E": 2}, {"s": 2})
    for _ in range(200):
        phi = random_formula(rng, vocab, ["x", "y", "z"], 4, comparisons=("=", "!=", "<=", "!<="),
                             builtins=True)
        assert parse_formula(to_text(phi), vocab) == phi


def test_strict_grammar_flags_nested_comparisons():
    ok = parse_formula("(exists x. P(x)) <= (exists x. Q(x))", PQ)
    assert strict_violations(ok) == []
    nested = parse_formula("((exists x. P(x)) <= (exists x. Q(x))) = (exists x. P(x))", PQ)
    assert strict_violations(nested)


# ---------------------------------------------------------------------------
# evaluation


def test_universal_product_is_two_to_the_n():
    pi2 = pq(NATURAL, 3, 1, 2)
    assert value_of(parse_formula("forall x. Q(x)", PQ), pi2) == 8
    phi = parse_formula("forall x. P(x) = forall x. Q(x)", PQ)
    assert value_of(phi, pi2) == 0
    assert value_of(phi, pq(NATURAL, 3, 1, 1)) == 1


def test_xi_collapses_both_interpretations():
    assert xi_interpretation(pq(NATURAL, 3, 1, 1)).items() == xi_interpretation(pq(NATURAL, 3, 1, 2)).items()


def test_exists_x_equals_x_counts_elements():
    assert value_of(parse_formula("exists x. x = x", PQ), pq(NATURAL, 3, 0, 0)) == 3


def test_comparison_results_are_one_and_zero_of_k():
    pi = pq(TROPICAL, 2, F(3), F(5))
    phi = parse_formula("(exists x. P(x)) = (exists x. P(x))", PQ)
    assert value_of(phi, pi) == TROPICAL.one == F(0)
    phi = parse_formula("(exists x. P(x)) != (exists x. P(x))", PQ)
    assert value_of(phi, pi) == TROPICAL.zero == INF


def flight_network():
    edges = {("HEL", "NRT"): 13, ("HEL", "LAX"): 11, ("MEL", "LAX"): 16,
             ("LAX", "NRT"): 10, ("MEL", "NRT"): 10}
    A = ["HEL", "NRT", "LAX", "MEL"]
    w = {}
    for (a, b), d in edges.items():
        w[(a, b)] = w[(b, a)] = F(d)

    def val(neg, rel, args):
        pos = w.get(args, INF)
        if neg:
            return TROPICAL.one if pos == INF else INF
        return pos

    return Interpretation.from_function(TROPICAL, A, E2, val), w


def test_flight_network_against_triple_enumeration():
    pi, w = flight_network()
    phi = parse_formula("forall x, y, z. ((E(x,z) & E(z,y)) <= E(x,y))", E2)
    got, _ = evaluate(phi, pi)
    acc = TROPICAL.one
    for x, y, z in itertools.product(pi.universe, repeat=3):
        lhs = w.get((x, z), INF) + w.get((z, y), INF) if INF not in (w.get((x, z), INF), w.get((z, y), INF)) else INF
        rhs = w.get((x, y), INF)
        ok = TROPICAL.leq(lhs, rhs)  # reverse numeric order, inf least
        acc = TROPICAL.times(acc, TROPICAL.one if ok else TROPICAL.zero)
    assert got == acc
    # several triples fail (e.g. a detour is shorter than a missing edge), so the value is zero
    assert got == INF
    assert is_model_defining(pi)


def test_unbound_variable_is_an_error():
    with pytest.raises(EvaluationError):
        evaluate(parse_formula("P(x)", PQ), pq(NATURAL, 2, 1, 1))


def test_assignment_outside_universe_is_an_error():
    with pytest.raises(EvaluationError):
        evaluate(parse_formula("P(x)", PQ), pq(NATURAL, 2, 1, 1), s={"x": "9"})


def test_order_comparison_needs_an_ordered_semiring():
    from semiring_fo import Semiring, UnsupportedOrderError

    plain = Semiring("plain", 0, 1, lambda a, b: a + b, lambda a, b: a * b,
                     lambda a: isinstance(a, int) and a >= 0, int)
    pi = Interpretation.from_function(plain, ["1"], PQ, lambda *_: 1)
    with pytest.raises(UnsupportedOrderError):
        evaluate(parse_formula("(exists x. P(x)) <= (exists x. Q(x))", PQ), pi)


def test_builtins_use_the_ranking_function():
    vocab = Vocabulary.of({"P": 1}, {"succ": 2})
    rho = BuiltinInterpretation(NATURAL, {"succ": indicator_symbol(NATURAL, 2, "successor")})
    pi = Interpretation.from_function(NATURAL, ["c", "a", "b"], vocab, lambda *_: 1)
    phi = parse_formula("exists x, y. succ(x, y)", vocab)
    assert value_of(phi, pi, rho) == 2
    phi = parse_formula("exists x, y. ~succ(x, y)", vocab)
    assert value_of(phi, pi, rho) == 7
    with pytest.raises(EvaluationError):
        value_of(phi, pi)


def test_evaluation_ignores_irrelevant_assignment_entries():
    pi = pq(NATURAL, 3, 2, 3)
    phi = parse_formula("P(x) & exists y. Q(y)", PQ)
    a, _ = evaluate(phi, pi, s={"x": "1"})
    b, _ = evaluate(phi, pi, s={"x": "1", "z": "2"})
    assert a == b == 18


@pytest.mark.parametrize("spec", [NATURAL, TROPICAL, PROBABILITY, POLYNOMIAL, BOOLEAN])
def test_evaluator_matches_table_oracle(spec):
    rng = random.Random(11)
    vocab = Vocabulary.of({"P": 1, "E": 2, "Z": 0})
    comps = ("=", "!=", "<=", "!<=")
    for _ in range(60):
        n = rng.randint(1, 3)
        phi = random_formula(rng, vocab, ["x", "y", "z"], 3, comparisons=comps)
        pi = random_interpretation(rng, spec, vocab, n)
        assert value_of(phi, pi) == table_value(phi, pi)
        assert value_of(phi, pi, short_circuit=True) == value_of(phi, pi)


def test_call_bound_on_random_formulas():
    rng = random.Random(5)
    vocab = Vocabulary.of({"P": 1, "E": 2})
    for _ in range(100):
        n = rng.randint(1, 4)
        phi = random_formula(rng, vocab, ["x", "y"], 4)
        _, stats = evaluate(phi, random_interpretation(rng, NATURAL, vocab, n))
        assert stats.calls <= call_bound(phi, n)


def test_call_count_is_exact_for_a_simple_formula():
    # exists x. P(x) & Q(x): one ∧ per element, two literals per element
    pi = pq(NATURAL, 3, 1, 1)
    _, stats = evaluate(parse_formula("exists x. P(x) & Q(x)", PQ), pi)
    assert stats.calls == 9
    assert stats.conjunctions == 3
    assert stats.quantifier_expansions == 3


def test_short_circuit_skips_after_zero():
    pi = pq(NATURAL, 3, 0, 1)
    phi = parse_formula("forall x. P(x) & Q(x)", PQ)
    full, s_full = evaluate(phi, pi)
    fast, s_fast = evaluate(phi, pi, short_circuit=True)
    assert full == fast == 0
    assert s_fast.calls < s_full.calls


# ---------------------------------------------------------------------------
# encoding


def test_encoding_block_layout():
    vocab = Vocabulary.of({"P": 1})
    vals = {(False, "P", ("a",)): 2, (False, "P", ("b",)): 0,
            (True, "P", ("a",)): 0, (True, "P", ("b",)): 7}
    pi = Interpretation(NATURAL, ["a", "b"], vocab, vals)
    assert encode_interpretation(pi) == [2, 0, 0, 7]


def test_encoding_nullary_copies():
    vocab = Vocabulary.of({"R": 0})
    pi = Interpretation(NATURAL, ["a", "b"], vocab, {(False, "R", ()): 5, (True, "R", ()): 0})
    assert encode_interpretation(pi) == [5, 5, 0, 0]


def test_encoding_length_binary():
    assert encoding_length(E2, 3) == 18


def test_literal_position_agrees_with_encoding():
    rng = random.Random(2)
    vocab = Vocabulary.of({"P": 1, "E": 2, "Z": 0})
    pi = random_interpretation(rng, NATURAL, vocab, 3)
    vec = encode_interpretation(pi)
    for rel, ar in vocab.relations:
        for ranks in itertools.product(range(1, 4), repeat=ar):
            for neg in (False, True):
                args = tuple(str(r) for r in ranks)
                assert vec[literal_position(vocab, 3, rel, ranks, neg)] == pi.value(rel, args, neg)


def test_decode_interpretation_inverts_encoding():
    rng = random.Random(4)
    vocab = Vocabulary.of({"P": 1, "E": 2})
    for n in range(0, 4):
        pi = random_interpretation(rng, TROPICAL, vocab, n)
        back = decode_interpretation(TROPICAL, encode_interpretation(pi), vocab)
        assert back.items() == pi.items()


def test_decode_universe_size_examples():
    assert decode_universe_size(18, E2) == 3
    assert decode_universe_size(24, Vocabulary.of({"E": 2, "P": 1})) == 3
    with pytest.raises(DecodeError):
        decode_universe_size(20, E2)


@settings(max_examples=150, deadline=None)
@given(st.lists(st.integers(0, 3), min_size=1, max_size=3), st.integers(0, 20))
def test_decode_universe_size_property(arities, n):
    vocab = Vocabulary.of({f"R{i}": a for i, a in enumerate(arities)})
    length = encoding_length(vocab, n)
    got, probes = decode_universe_size(length, vocab, with_probes=True)
    assert got == n
    assert probes <= max(1, (length + 2 - 1).bit_length())


# ---------------------------------------------------------------------------
# Boolean structures and rewrites


def test_canonical_boolean_values():
    pi = canonical_boolean(["a", "b"], E2, {"E": [("a", "b")]})
    assert pi.value("E", ("a", "b"), False) is True
    assert pi.value("E", ("a", "b"), True) is False
    assert pi.value("E", ("b", "a"), False) is False
    assert pi.value("E", ("b", "a"), True) is True
    assert is_model_defining(pi)


def test_canonical_boolean_rejects_bad_arity():
    with pytest.raises(InterpretationError):
        canonical_boolean(["a"], E2, {"E": [("a",)]})


def test_empty_relation_gives_zero_positives():
    pi = canonical_boolean(["a", "b"], E2, {})
    assert not any(v for (neg, _, _), v in pi.items() if not neg)


def test_canonical_boolean_agrees_with_classical_truth():
    rng = random.Random(9)
    vocab = Vocabulary.of({"P": 1, "E": 2})
    for _ in range(150):
        n = rng.randint(1, 3)
        universe = [str(i) for i in range(1, n + 1)]
        rels = {"P": {(a,) for a in universe if rng.random() < 0.5},
                "E": {t for t in itertools.product(universe, repeat=2) if rng.random() < 0.4}}
        phi = random_formula(rng, vocab, ["x", "y"], 3)
        assert value_of(phi, canonical_boolean(universe, vocab, rels)) == classical(phi, universe, rels, {})


def test_model_defining_examples():
    assert is_model_defining(pq(NATURAL, 3, 1, 2))
    vals = {(False, "P", ("a",)): 1, (True, "P", ("a",)): 1,
            (False, "Q", ("a",)): 1, (True, "Q", ("a",)): 0}
    assert not is_model_defining(Interpretation(NATURAL, ["a"], PQ, vals))


def test_nnf_negate_examples():
    assert nnf_negate(parse_formula("exists x. P(x)", PQ)) == Forall("x", Atom("P", ("x",), True))
    assert nnf_negate(VarEq("x", "y")) == VarEq("x", "y", True)
    assert nnf_negate(BuiltinAtom("s", ("x",))) == BuiltinAtom("s", ("x",), True)


def test_elimination_of_leq():
    phi = Compare("<=", Atom("P", ("x",)), Atom("Q", ("x",)))
    assert eliminate_comparisons_boolean(phi) == Or(Atom("P", ("x",), True), Atom("Q", ("x",)))


def random_structure(rng, vocab, n):
    universe = [str(i) for i in range(1, n + 1)]
    rels = {rel: {t for t in itertools.product(universe, repeat=ar) if rng.random() < 0.45}
            for rel, ar in vocab.relations}
    return universe, rels


def test_elimination_preserves_boolean_values():
    rng = random.Random(21)
    vocab = Vocabulary.of({"P": 1, "E": 2})
    for _ in range(200):
        phi = random_formula(rng, vocab, ["x", "y"], 3, comparisons=("=", "!=", "<=", "!<="))
        universe, rels = random_structure(rng, vocab, rng.randint(1, 3))
        pi = canonical_boolean(universe, vocab, rels)
        psi = eliminate_comparisons_boolean(phi)
        assert strict_violations(psi) == [] and "<=" not in to_text(psi)
        assert value_of(psi, pi) == value_of(phi, pi)


# ---------------------------------------------------------------------------
# files


def test_interpretation_document_round_trip(tmp_path):
    pi = pq(NATURAL, 3, 1, 2)
    path = tmp_path / "pi.json"
    path.write_text(json.dumps(interpretation_to_doc(pi)))
    assert load_interpretation(path).items() == pi.items()


def test_missing_literal_is_an_error():
    doc = interpretation_to_doc(pq(NATURAL, 2, 1, 2))
    del doc["literals"]["~Q(2)"]
    with pytest.raises(FileFormatError, match="missing"):
        load_interpretation(doc)


def test_mixed_semirings_are_rejected():
    doc = interpretation_to_doc(pq(NATURAL, 2, 1, 2))
    with pytest.raises(FileFormatError):
        load_interpretation(doc, TROPICAL)


def test_builtins_document_round_trip():
    doc = {"semiring": "natural", "builtins": {
        "succ": {"arity": 2, "positive": {"generator": "successor"},
                 "negative": {"generator": "successor", "negate": True}},
        "w": {"arity": 1, "positive": {"tables": {"3": {"1": "5", "2": "7"}}, "default": "0"},
              "negative": {"generator": "constant", "value": "0"}}}}
    rho = load_builtins(doc)
    assert rho.value("succ", 3, (1, 2), False) == 1
    assert rho.value("succ", 3, (1, 3), True) == 1
    assert rho.value("w", 3, (2,), False) == 7
    assert rho.value("w", 3, (3,), False) == 0
    again = load_builtins(builtins_to_doc(rho))
    for n in (2, 3):
        for r in itertools.product(range(1, n + 1), repeat=2):
            for neg in (False, True):
                assert again.value("succ", n, r, neg) == rho.value("succ", n, r, neg)


def test_elimination_needs_model_defining_input():
    # with P(a) and ~P(a) both 0, nnf(~phi) is not the complement of phi
    vocab = Vocabulary.of({"P": 1})
    pi = Interpretation.from_function(BOOLEAN, ["a"], vocab, lambda *_: False)
    phi = parse_formula("(exists x. P(x)) <= (exists x. P(x))", vocab)
    assert value_of(phi, pi) is True
    assert value_of(eliminate_comparisons_boolean(phi), pi) is False
