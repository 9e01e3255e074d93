import itertools
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from semiring_fo import (
    BOOLEAN,
    INF,
    LUKASIEWICZ,
    NATURAL,
    POLYNOMIAL,
    PROBABILITY,
    SEMIRINGS,
    TROPICAL,
    Polynomial,
    Semiring,
    UnsupportedOrderError,
    add,
    check_laws,
    get_semiring,
    leq,
    mul,
    xi,
)
from semiring_fo.semiring import random_element, sample_set


def poly(text):
    return POLYNOMIAL.parse(text)


def test_natural_add():
    assert add(NATURAL, 2, 3) == 5


def test_tropical_add_is_min():
    assert add(TROPICAL, F(3), F(5)) == 3


def test_lukasiewicz_add_is_max():
    assert add(LUKASIEWICZ, F(3, 10), F(1, 2)) == F(1, 2)


def test_tropical_mul_is_plus():
    assert mul(TROPICAL, F(3), F(5)) == 8
    assert mul(TROPICAL, F(3), INF) == INF


def test_lukasiewicz_mul():
    assert mul(LUKASIEWICZ, F(7, 10), F(6, 10)) == F(3, 10)
    assert mul(LUKASIEWICZ, F(1, 2), F(1, 2)) == 0


def test_polynomial_mul():
    assert mul(POLYNOMIAL, poly("x + y"), poly("x")) == poly("x^2 + x*y")


def test_polynomial_canonical_form():
    assert poly("y*x + 2*x*y") == poly("3*x*y")
    assert POLYNOMIAL.format(poly("2*x^2*y + 3")) in ("2*x^2*y + 3", "3 + 2*x^2*y")


def test_tropical_order_is_reverse_numeric():
    assert leq(TROPICAL, INF, F(5))
    assert not leq(TROPICAL, F(3), F(7))
    assert leq(TROPICAL, F(7), F(3))


def test_tropical_order_matches_natural_order_oracle():
    samples = sample_set(TROPICAL)
    for a, b in itertools.product(samples, repeat=2):
        assert leq(TROPICAL, a, b) == (TROPICAL.plus(a, b) == b)


def test_boolean_order():
    assert leq(BOOLEAN, False, True)
    assert not leq(BOOLEAN, True, False)


def test_polynomial_order_is_partial():
    a, b = poly("x"), poly("y")
    assert not leq(POLYNOMIAL, a, b) and not leq(POLYNOMIAL, b, a)
    assert leq(POLYNOMIAL, a, poly("2*x + y"))


def test_unordered_semiring_raises():
    plain = Semiring("plain", 0, 1, lambda a, b: a + b, lambda a, b: a * b,
                     lambda a: isinstance(a, int) and a >= 0, int)
    with pytest.raises(UnsupportedOrderError):
        leq(plain, 1, 2)


def test_xi():
    assert xi(NATURAL, 0) is False
    assert xi(TROPICAL, INF) is False
    assert xi(TROPICAL, F(0)) is True
    assert xi(POLYNOMIAL, poly("x + 2*y")) is True


def test_sum_and_prod_of_empty_lists():
    for spec in SEMIRINGS.values():
        assert spec.sum([]) == spec.zero
        assert spec.prod([]) == spec.one


def test_instance_mismatch_is_a_type_error():
    with pytest.raises(TypeError):
        add(NATURAL, 2, F(1, 2))
    with pytest.raises(TypeError):
        add(LUKASIEWICZ, F(3, 2), F(0))


def test_parse_and_format_round_trip():
    cases = {BOOLEAN: ["true", "false"], NATURAL: ["0", "12345678901234567890"],
             TROPICAL: ["inf", "0", "7/2"], LUKASIEWICZ: ["0", "1/3", "1"],
             PROBABILITY: ["5/2", "0"], POLYNOMIAL: ["0", "1", "2*x^2*y + 3"]}
    for spec, texts in cases.items():
        for t in texts:
            a = spec.parse(t)
            assert spec.parse(spec.format(a)) == a


def test_parse_rejects_out_of_range():
    with pytest.raises(ValueError):
        LUKASIEWICZ.parse("3/2")
    with pytest.raises(ValueError):
        NATURAL.parse("-1")


def test_aliases():
    assert get_semiring("trop") is TROPICAL
    assert get_semiring("N") is NATURAL


@pytest.mark.parametrize("name", sorted(SEMIRINGS))
def test_builtin_laws_hold_on_samples(name):
    spec = SEMIRINGS[name]
    report = check_laws(spec, sample_set(spec))
    assert report.ok, report.violations


def test_natural_and_tropical_examples_pass_laws():
    assert check_laws(NATURAL, [0, 1, 2, 3]).ok
    assert check_laws(TROPICAL, [INF, F(0), F(1), F(5)]).ok


def test_broken_semiring_reports_nontriviality():
    broken = Semiring("broken", 0, 0, lambda a, b: a + b, lambda a, b: a * b,
                      lambda a: isinstance(a, int), int)
    report = check_laws(broken, [0, 1])
    assert "nontriviality" in report.laws_violated()


def test_lukasiewicz_has_zero_divisors():
    # 1/2 * 1/2 = max(0, 0) = 0, so the instance is not positive
    assert not LUKASIEWICZ.positive
    assert mul(LUKASIEWICZ, F(1, 2), F(1, 2)) == LUKASIEWICZ.zero


@pytest.mark.parametrize("name", [n for n in sorted(SEMIRINGS) if SEMIRINGS[n].positive])
def test_xi_is_a_homomorphism_on_positive_instances(name):
    spec = SEMIRINGS[name]
    for a, b in itertools.product(sample_set(spec), repeat=2):
        assert xi(spec, spec.plus(a, b)) == (xi(spec, a) or xi(spec, b))
        assert xi(spec, spec.times(a, b)) == (xi(spec, a) and xi(spec, b))


@pytest.mark.parametrize("name", sorted(SEMIRINGS))
def test_random_samples_pass_laws(name):
    import random

    spec = SEMIRINGS[name]
    rng = random.Random(7)
    samples = [random_element(spec, rng) for _ in range(8)]
    assert check_laws(spec, samples).ok


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(0, 50), max_size=6), st.randoms())
def test_sum_is_permutation_invariant(xs, rnd):
    ys = list(xs)
    rnd.shuffle(ys)
    assert NATURAL.sum(xs) == NATURAL.sum(ys)
    txs = [F(x) for x in xs]
    tys = [F(y) for y in ys]
    assert TROPICAL.prod(txs) == TROPICAL.prod(tys)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 20), st.integers(0, 20), st.integers(0, 20))
def test_tropical_order_is_monotone(a, b, c):
    a, b, c = F(a), F(b), F(c)
    if leq(TROPICAL, a, b):
        assert leq(TROPICAL, TROPICAL.plus(a, c), TROPICAL.plus(b, c))


def test_polynomial_is_hashable_and_structural():
    assert hash(poly("x*y")) == hash(poly("y*x"))
    assert isinstance(poly("x"), Polynomial)
