"""Flat vector encoding of interpretations and recovery of the universe size.

Layout: relations in vocabulary order; for each relation all positive
literals, then all negative ones; tuples in lexicographic order of the
universe. A nullary relation is laid out as if unary, i.e. |A| copies.
"""

from __future__ import annotations

import itertools
from typing import Iterable

from .interpretation import Interpretation
from .syntax import Vocabulary


class DecodeError(ValueError):
    pass


def encoding_length(vocab: Vocabulary, n: int) -> int:
    return sum(2 * n ** max(ar, 1) for _, ar in vocab.relations)


def encode_interpretation(pi: Interpretation) -> list:
    out = []
    A = pi.universe
    for rel, ar in pi.vocab.relations:
        for neg in (False, True):
            if ar == 0:
                out.extend([pi.value(rel, (), neg)] * len(A))
            else:
                out.extend(pi.value(rel, args, neg) for args in itertools.product(A, repeat=ar))
    return out


def literal_position(vocab: Vocabulary, n: int, rel: str, ranks: tuple, negated: bool,
                     copy: int = 1) -> int:
    """0-based index of a literal in the encoding; ranks are 1-based.

    For a nullary relation ``copy`` selects which of the n copies is meant.
    """
    pos = 0
    for name, ar in vocab.relations:
        block = n ** max(ar, 1)
        if name == rel:
            if len(ranks) != ar:
                raise ValueError(f"{rel} has arity {ar}")
            idx = 0
            for r in (ranks if ar else (copy,)):
                if not 1 <= r <= n:
                    raise ValueError(f"rank {r} outside 1..{n}")
                idx = idx * n + (r - 1)
            return pos + (block if negated else 0) + idx
        pos += 2 * block
    raise ValueError(f"unknown relation {rel}")


def decode_interpretation(spec, vector: list, vocab: Vocabulary,
                          universe: Iterable | None = None) -> Interpretation:
    """Inverse of encode_interpretation (nullary copies must agree)."""
    n = decode_universe_size(len(vector), vocab)
    universe = tuple(universe) if universe is not None else tuple(str(i) for i in range(1, n + 1))
    if len(universe) != n:
        raise DecodeError(f"universe has {len(universe)} elements, encoding needs {n}")
    values = {}
    pos = 0
    for rel, ar in vocab.relations:
        for neg in (False, True):
            if ar == 0:
                chunk = vector[pos:pos + n]
                if len(set(map(repr, chunk))) > 1:
                    raise DecodeError(f"copies of nullary {rel} disagree")
                values[(neg, rel, ())] = chunk[0] if chunk else spec.zero
                pos += n
            else:
                for args in itertools.product(universe, repeat=ar):
                    values[(neg, rel, args)] = vector[pos]
                    pos += 1
    if n == 0:
        for rel, ar in vocab.relations:
            if ar == 0:
                # nothing is encoded when the universe is empty
                values[(False, rel, ())] = spec.zero
                values[(True, rel, ())] = spec.zero
    return Interpretation(spec, universe, vocab, values)


def decode_universe_size(length: int, vocab: Vocabulary, *, with_probes: bool = False):
    """Binary search for the n with encoding_length(vocab, n) == length.

    The search range is 0..length because every relation contributes at
    least 2n entries.
    """
    if length < 0:
        raise DecodeError("length must be non-negative")
    if not vocab.relations:
        raise DecodeError("an empty vocabulary encodes every universe as the empty vector")
    lo, hi = 0, length
    probes = 0
    while lo <= hi:
        mid = (lo + hi) // 2
        probes += 1
        got = encoding_length(vocab, mid)
        if got == length:
            return (mid, probes) if with_probes else mid
        if got < length:
            lo = mid + 1
        else:
            hi = mid - 1
    raise DecodeError(f"no universe size gives an encoding of length {length}")
