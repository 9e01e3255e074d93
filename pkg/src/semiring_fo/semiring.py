"""Commutative semirings with exact arithmetic.

Every built-in instance is a :class:`Semiring` value carrying its operations,
identities, flags and (optional) partial order. Elements are plain Python
values: ``bool`` for the Boolean semiring, ``int`` for the naturals,
``Fraction`` for the rational instances, :data:`INF` for tropical infinity and
:class:`Polynomial` for provenance polynomials.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from typing import Any, Callable, Iterable, Optional


class SemiringError(Exception):
    pass


class UnsupportedOrderError(SemiringError):
    pass


class _Infinity:
    """Tropical infinity (the additive identity of min-plus)."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INF"

    def __str__(self):
        return "inf"

    def __reduce__(self):
        return (_Infinity, ())


INF = _Infinity()


# ---------------------------------------------------------------------------
# Provenance polynomials


def _norm_monomial(m: Iterable[tuple[str, int]]) -> tuple[tuple[str, int], ...]:
    acc: dict[str, int] = {}
    for var, e in m:
        if e:
            acc[var] = acc.get(var, 0) + e
    return tuple(sorted(acc.items()))


class Polynomial:
    """Polynomial with natural coefficients over interned string indeterminates.

    Stored as a sorted tuple of ``(monomial, coefficient)`` pairs where a
    monomial is a sorted tuple of ``(variable, exponent)``; zero coefficients
    never appear, so structural equality is polynomial equality.
    """

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Any = ()):
        if isinstance(terms, dict):
            items = terms.items()
        else:
            items = terms
        acc: dict[tuple, int] = {}
        for mono, coeff in items:
            if not isinstance(coeff, int) or isinstance(coeff, bool) or coeff < 0:
                raise ValueError(f"coefficient must be a natural number, got {coeff!r}")
            mono = _norm_monomial(mono)
            acc[mono] = acc.get(mono, 0) + coeff
        self.terms = tuple(sorted((m, c) for m, c in acc.items() if c))
        self._hash = hash(self.terms)

    @classmethod
    def const(cls, c: int) -> "Polynomial":
        return cls({(): c})

    @classmethod
    def var(cls, name: str) -> "Polynomial":
        return cls({((name, 1),): 1})

    def coeff(self, mono) -> int:
        mono = _norm_monomial(mono)
        for m, c in self.terms:
            if m == mono:
                return c
        return 0

    def __eq__(self, other):
        return isinstance(other, Polynomial) and self.terms == other.terms

    def __hash__(self):
        return self._hash

    def __add__(self, other: "Polynomial") -> "Polynomial":
        return Polynomial(self.terms + other.terms)

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        out = []
        for (m1, c1), (m2, c2) in itertools.product(self.terms, other.terms):
            out.append((m1 + m2, c1 * c2))
        return Polynomial(out)

    def __le__(self, other: "Polynomial") -> bool:
        theirs = dict(other.terms)
        return all(c <= theirs.get(m, 0) for m, c in self.terms)

    def __repr__(self):
        return f"Polynomial({str(self)!r})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        # highest total degree first reads more naturally
        for mono, c in sorted(self.terms, key=lambda t: (-sum(e for _, e in t[0]), t[0])):
            factors = [v if e == 1 else f"{v}^{e}" for v, e in mono]
            if c != 1 or not factors:
                factors.insert(0, str(c))
            parts.append("*".join(factors))
        return " + ".join(parts)


_TERM_RE = re.compile(r"\s*([A-Za-z_][A-Za-z0-9_]*|\d+)(?:\^(\d+))?\s*")


def parse_polynomial(text: str) -> Polynomial:
    text = text.strip()
    if not text:
        raise ValueError("empty polynomial")
    terms = []
    for chunk in text.split("+"):
        coeff = 1
        mono = []
        factors = chunk.split("*")
        for f in factors:
            m = _TERM_RE.fullmatch(f)
            if not m:
                raise ValueError(f"bad polynomial factor {f.strip()!r}")
            base, exp = m.group(1), m.group(2)
            e = int(exp) if exp is not None else 1
            if base.isdigit():
                coeff *= int(base) ** e
            else:
                mono.append((base, e))
        terms.append((tuple(mono), coeff))
    return Polynomial(terms)


# ---------------------------------------------------------------------------
# The semiring record


@dataclass(frozen=True, eq=False)
class Semiring:
    """A commutative semiring (K, +, ·, 0, 1) plus metadata.

    ``leq`` is None for unordered instances. ``contains`` is the membership
    test used to reject elements of a different instance.
    """

    name: str
    zero: Any
    one: Any
    plus: Callable[[Any, Any], Any]
    times: Callable[[Any, Any], Any]
    contains: Callable[[Any], bool]
    parse_text: Callable[[str], Any]
    format_text: Callable[[Any], str] = str
    order: Optional[Callable[[Any, Any], bool]] = None
    commutative: bool = True
    positive: bool = True
    idempotent: bool = False
    normalize: Callable[[Any], Any] = field(default=lambda a: a)

    @property
    def ordered(self) -> bool:
        return self.order is not None

    def check(self, a):
        if not self.contains(a):
            raise TypeError(f"{a!r} is not an element of the {self.name} semiring")
        return self.normalize(a)

    def add(self, a, b):
        return self.plus(self.check(a), self.check(b))

    def mul(self, a, b):
        return self.times(self.check(a), self.check(b))

    def sum(self, items: Iterable) -> Any:
        return reduce(self.add, items, self.zero)

    def prod(self, items: Iterable) -> Any:
        return reduce(self.mul, items, self.one)

    def leq(self, a, b) -> bool:
        if self.order is None:
            raise UnsupportedOrderError(f"the {self.name} semiring is not ordered")
        return self.order(self.check(a), self.check(b))

    def is_zero(self, a) -> bool:
        return self.check(a) == self.zero

    def xi(self, a) -> bool:
        return not self.is_zero(a)

    def parse(self, text: str):
        try:
            value = self.parse_text(str(text).strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"cannot parse {text!r} as a {self.name} element: {exc}") from None
        if not self.contains(value):
            raise ValueError(f"{text!r} is not an element of the {self.name} semiring")
        return self.normalize(value)

    def format(self, a) -> str:
        return self.format_text(self.check(a))

    def __repr__(self):
        return f"<Semiring {self.name}>"


# ---------------------------------------------------------------------------
# Built-ins


def _is_nat(a):
    return isinstance(a, int) and not isinstance(a, bool) and a >= 0


def _is_rational(a):
    return (isinstance(a, Fraction) or (isinstance(a, int) and not isinstance(a, bool)))


def _to_fraction(a):
    return Fraction(a)


def _fmt_fraction(a):
    a = Fraction(a)
    return str(a.numerator) if a.denominator == 1 else f"{a.numerator}/{a.denominator}"


def _parse_bool(text):
    t = text.lower()
    if t in ("true", "1"):
        return True
    if t in ("false", "0"):
        return False
    raise ValueError("expected true/false")


def _parse_nat(text):
    if not re.fullmatch(r"\d+", text):
        raise ValueError("expected a decimal natural")
    return int(text)


def _parse_fraction(text):
    if not re.fullmatch(r"\d+(/\d+)?|\d*\.\d+", text):
        raise ValueError("expected a non-negative rational p/q")
    return Fraction(text)


def _parse_tropical(text):
    if text.lower() in ("inf", "infinity", "∞"):
        return INF
    sign = -1 if text.startswith("-") else 1
    body = text[1:] if sign < 0 else text
    return sign * _parse_fraction(body)


def _trop_num_le(a, b):
    # numeric order with INF on top
    if b is INF:
        return True
    if a is INF:
        return False
    return a <= b


def _trop_add(a, b):
    return a if _trop_num_le(a, b) else b


def _trop_mul(a, b):
    if a is INF or b is INF:
        return INF
    return a + b


def _trop_norm(a):
    return a if a is INF else Fraction(a)


BOOLEAN = Semiring(
    name="boolean",
    zero=False,
    one=True,
    plus=lambda a, b: a or b,
    times=lambda a, b: a and b,
    contains=lambda a: isinstance(a, bool),
    parse_text=_parse_bool,
    format_text=lambda a: "true" if a else "false",
    order=lambda a, b: (not a) or b,
    idempotent=True,
)

NATURAL = Semiring(
    name="natural",
    zero=0,
    one=1,
    plus=lambda a, b: a + b,
    times=lambda a, b: a * b,
    contains=_is_nat,
    parse_text=_parse_nat,
    order=lambda a, b: a <= b,
)

TROPICAL = Semiring(
    name="tropical",
    zero=INF,
    one=Fraction(0),
    plus=_trop_add,
    times=_trop_mul,
    contains=lambda a: a is INF or _is_rational(a),
    parse_text=_parse_tropical,
    format_text=lambda a: "inf" if a is INF else _fmt_fraction(a),
    # natural order of an idempotent semiring: a ⊑ b iff min(a, b) = b
    order=lambda a, b: _trop_num_le(b, a),
    idempotent=True,
    normalize=_trop_norm,
)

LUKASIEWICZ = Semiring(
    name="lukasiewicz",
    zero=Fraction(0),
    one=Fraction(1),
    plus=max,
    times=lambda a, b: max(Fraction(0), a + b - 1),
    contains=lambda a: _is_rational(a) and 0 <= a <= 1,
    parse_text=_parse_fraction,
    format_text=_fmt_fraction,
    order=lambda a, b: a <= b,
    # 1/2 · 1/2 = 0, so the instance has zero divisors
    positive=False,
    idempotent=True,
    normalize=_to_fraction,
)

PROBABILITY = Semiring(
    name="probability",
    zero=Fraction(0),
    one=Fraction(1),
    plus=lambda a, b: a + b,
    times=lambda a, b: a * b,
    contains=lambda a: _is_rational(a) and a >= 0,
    parse_text=_parse_fraction,
    format_text=_fmt_fraction,
    order=lambda a, b: a <= b,
    normalize=_to_fraction,
)


def _parse_poly_elem(text):
    return parse_polynomial(text)


POLYNOMIAL = Semiring(
    name="polynomial",
    zero=Polynomial(),
    one=Polynomial.const(1),
    plus=lambda a, b: a + b,
    times=lambda a, b: a * b,
    contains=lambda a: isinstance(a, Polynomial),
    parse_text=_parse_poly_elem,
    order=lambda a, b: a <= b,
)

SEMIRINGS: dict[str, Semiring] = {
    s.name: s for s in (BOOLEAN, NATURAL, TROPICAL, LUKASIEWICZ, PROBABILITY, POLYNOMIAL)
}
_ALIASES = {
    "bool": "boolean", "b": "boolean",
    "nat": "natural", "n": "natural", "naturals": "natural",
    "trop": "tropical", "t": "tropical", "min-plus": "tropical",
    "luk": "lukasiewicz", "l": "lukasiewicz",
    "prob": "probability",
    "poly": "polynomial", "n[x]": "polynomial", "nx": "polynomial",
}


def get_semiring(name: str) -> Semiring:
    key = name.strip().lower()
    key = _ALIASES.get(key, key)
    try:
        return SEMIRINGS[key]
    except KeyError:
        known = ", ".join(sorted(SEMIRINGS))
        raise SemiringError(f"unknown semiring {name!r} (known: {known})") from None


# Functional spelling used throughout the library.

def add(spec: Semiring, a, b):
    return spec.add(a, b)


def mul(spec: Semiring, a, b):
    return spec.mul(a, b)


def ssum(spec: Semiring, items: Iterable):
    return spec.sum(items)


def sprod(spec: Semiring, items: Iterable):
    return spec.prod(items)


def leq(spec: Semiring, a, b) -> bool:
    return spec.leq(a, b)


def xi(spec: Semiring, a) -> bool:
    return spec.xi(a)


# ---------------------------------------------------------------------------
# Law checking


@dataclass
class Violation:
    law: str
    witness: tuple

    def __str__(self):
        return f"{self.law}: {self.witness}"


@dataclass
class LawReport:
    spec_name: str
    checked: list[str] = field(default_factory=list)
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def laws_violated(self) -> set[str]:
        return {v.law for v in self.violations}


def check_laws(spec: Semiring, samples: list) -> LawReport:
    """Check the semiring axioms exhaustively over triples drawn from samples.

    Only the first counterexample per law is recorded.
    """
    if not samples:
        raise ValueError("need at least one sample")
    samples = [spec.check(s) for s in samples]
    report = LawReport(spec.name)
    P, T = spec.plus, spec.times
    z, o = spec.zero, spec.one
    seen: set[str] = set()

    def law(name, ok, *witness):
        if name not in report.checked:
            report.checked.append(name)
        if not ok and name not in seen:
            seen.add(name)
            report.violations.append(Violation(name, witness))

    law("nontriviality", z != o, z, o)
    for a in samples:
        law("additive identity", P(a, z) == a and P(z, a) == a, a)
        law("multiplicative identity", T(a, o) == a and T(o, a) == a, a)
        law("annihilation", T(a, z) == z and T(z, a) == z, a)
        if spec.ordered:
            law("order reflexivity", spec.order(a, a), a)
    for a, b in itertools.product(samples, repeat=2):
        law("additive commutativity", P(a, b) == P(b, a), a, b)
        if spec.commutative:
            law("multiplicative commutativity", T(a, b) == T(b, a), a, b)
        if spec.positive:
            law("no zero divisors", not (a != z and b != z and T(a, b) == z), a, b)
            law("zero-sum freeness", P(a, b) != z or (a == z and b == z), a, b)
        if spec.ordered:
            le = spec.order
            law("order antisymmetry", not (le(a, b) and le(b, a)) or a == b, a, b)
            if le(z, a) and le(z, b):
                law("product of nonnegatives", le(z, T(a, b)), a, b)
    for a, b, c in itertools.product(samples, repeat=3):
        law("additive associativity", P(P(a, b), c) == P(a, P(b, c)), a, b, c)
        law("multiplicative associativity", T(T(a, b), c) == T(a, T(b, c)), a, b, c)
        law("left distributivity", T(a, P(b, c)) == P(T(a, b), T(a, c)), a, b, c)
        law("right distributivity", T(P(a, b), c) == P(T(a, c), T(b, c)), a, b, c)
        if spec.ordered:
            le = spec.order
            law("order transitivity", not (le(a, b) and le(b, c)) or le(a, c), a, b, c)
            law("additive monotonicity", not le(a, b) or le(P(a, c), P(b, c)), a, b, c)
    return report


# ---------------------------------------------------------------------------
# Random elements (used by tests, the CLI verifier and the compilers)


def random_element(spec: Semiring, rng, *, small: bool = True):
    """Draw an element biased towards 0, 1 and small values."""
    r = rng.random()
    if r < 0.15:
        return spec.zero
    if r < 0.3:
        return spec.one
    name = spec.name
    if name == "boolean":
        return rng.random() < 0.5
    if name == "natural":
        return rng.randint(0, 5 if small else 1000)
    if name == "tropical":
        return Fraction(rng.randint(0, 12 if small else 1000))
    if name == "lukasiewicz":
        return Fraction(rng.randint(0, 8), 8)
    if name == "probability":
        return Fraction(rng.randint(0, 6), rng.randint(1, 3))
    if name == "polynomial":
        vars_ = ["x", "y", "z"]
        terms = []
        for _ in range(rng.randint(1, 2)):
            mono = tuple((v, rng.randint(1, 2)) for v in rng.sample(vars_, rng.randint(0, 2)))
            terms.append((mono, rng.randint(1, 3)))
        return Polynomial(terms)
    raise SemiringError(f"no sampler for {name}")


def sample_set(spec: Semiring) -> list:
    """A small fixed sample set exercising the interesting corners."""
    name = spec.name
    if name == "boolean":
        return [False, True]
    if name == "natural":
        return [0, 1, 2, 3, 7]
    if name == "tropical":
        return [INF, Fraction(0), Fraction(1), Fraction(5), Fraction(7, 2)]
    if name == "lukasiewicz":
        return [Fraction(0), Fraction(1), Fraction(1, 2), Fraction(3, 10), Fraction(7, 10)]
    if name == "probability":
        return [Fraction(0), Fraction(1), Fraction(1, 2), Fraction(3), Fraction(2, 3)]
    if name == "polynomial":
        p = parse_polynomial
        return [POLYNOMIAL.zero, POLYNOMIAL.one, p("x"), p("x + y"), p("2*x*y + 1")]
    raise SemiringError(f"no sample set for {name}")
