"""JSON documents for interpretations and built-in interpretations.

Interpretation::

    {"semiring": "natural",
     "universe": ["1", "2", "3"],
     "relations": {"P": 1, "Q": 1},
     "literals": {"P(1)": "1", "~P(1)": "0", ...}}

Built-ins::

    {"semiring": "natural",
     "builtins": {
        "succ": {"arity": 2,
                 "positive": {"generator": "successor"},
                 "negative": {"generator": "successor", "negate": true}},
        "w":    {"arity": 1,
                 "positive": {"tables": {"3": {"1": "5", "2": "7"}}, "default": "0"},
                 "negative": {"generator": "constant", "value": "0"}}}}

Table keys are comma-separated 1-based ranks.
"""

from __future__ import annotations

import json
import re
from pathlib import Path
from typing import Any

from ..semiring import Semiring, get_semiring
from .interpretation import (
    BuiltinFamily,
    BuiltinInterpretation,
    BuiltinSymbol,
    Interpretation,
    InterpretationError,
    generated_family,
)
from .syntax import Vocabulary


class FileFormatError(ValueError):
    pass


_LIT_RE = re.compile(r"\s*(~?)\s*([A-Za-z_][A-Za-z0-9_']*)\s*\(([^)]*)\)\s*")


def _load(path_or_doc) -> dict:
    if isinstance(path_or_doc, dict):
        return path_or_doc
    p = Path(path_or_doc)
    try:
        return json.loads(p.read_text())
    except json.JSONDecodeError as exc:
        raise FileFormatError(f"{p}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None


def _spec_of(doc: dict, spec: Semiring | None) -> Semiring:
    name = doc.get("semiring")
    if spec is not None:
        if name is not None and get_semiring(name) is not spec:
            raise FileFormatError(f"document is over {name}, but {spec.name} was requested")
        return spec
    if name is None:
        raise FileFormatError("document does not name a semiring")
    return get_semiring(name)


def parse_literal_key(key: str) -> tuple[bool, str, tuple[str, ...]]:
    m = _LIT_RE.fullmatch(key)
    if not m:
        raise FileFormatError(f"malformed literal {key!r}")
    args = tuple(a.strip() for a in m.group(3).split(",")) if m.group(3).strip() else ()
    return (m.group(1) == "~", m.group(2), args)


def literal_key(neg: bool, rel: str, args: tuple) -> str:
    return f"{'~' if neg else ''}{rel}({','.join(map(str, args))})"


def load_interpretation(path_or_doc, spec: Semiring | None = None,
                        builtins: dict | None = None) -> Interpretation:
    doc = _load(path_or_doc)
    spec = _spec_of(doc, spec)
    try:
        universe = [str(a) for a in doc["universe"]]
        relations = {str(k): int(v) for k, v in doc.get("relations", {}).items()}
        literals = doc["literals"]
    except (KeyError, TypeError, ValueError) as exc:
        raise FileFormatError(f"interpretation document is missing or mangles {exc}") from None
    vocab = Vocabulary.of(relations, builtins or doc.get("builtins") or {})
    values = {}
    for key, text in literals.items():
        neg, rel, args = parse_literal_key(key)
        try:
            values[(neg, rel, args)] = spec.parse(str(text))
        except ValueError as exc:
            raise FileFormatError(f"literal {key}: {exc}") from None
    try:
        return Interpretation(spec, universe, vocab, values)
    except InterpretationError as exc:
        raise FileFormatError(str(exc)) from None


def interpretation_to_doc(pi: Interpretation) -> dict:
    return {
        "semiring": pi.spec.name,
        "universe": list(pi.universe),
        "relations": dict(pi.vocab.relations),
        "literals": {literal_key(n, r, a): pi.spec.format(v) for (n, r, a), v in pi.items()},
    }


def _family_from_doc(spec: Semiring, arity: int, doc: dict) -> BuiltinFamily:
    if "generator" in doc:
        value = doc.get("value")
        if value is not None:
            value = spec.parse(str(value))
        return generated_family(spec, arity, doc["generator"], negate=bool(doc.get("negate")),
                                value=value)
    tables = {}
    for n_text, table in doc.get("tables", {}).items():
        entries = {}
        for k, v in table.items():
            ranks = tuple(int(x) for x in k.split(",")) if k.strip() else ()
            if len(ranks) != arity:
                raise FileFormatError(f"table key {k!r} does not have {arity} ranks")
            entries[ranks] = spec.parse(str(v))
        tables[int(n_text)] = entries
    default = doc.get("default")
    default = spec.parse(str(default)) if default is not None else None
    desc = {"tables": doc.get("tables", {})}
    if default is not None:
        desc["default"] = doc["default"]
    return BuiltinFamily(arity, tables=tables, default=default, description=desc)


def load_builtins(path_or_doc, spec: Semiring | None = None) -> BuiltinInterpretation:
    doc = _load(path_or_doc)
    spec = _spec_of(doc, spec)
    symbols = {}
    for name, entry in doc.get("builtins", {}).items():
        try:
            arity = int(entry["arity"])
            pos = _family_from_doc(spec, arity, entry["positive"])
            neg = _family_from_doc(spec, arity, entry["negative"])
        except KeyError as exc:
            raise FileFormatError(f"built-in {name} lacks {exc}") from None
        symbols[name] = BuiltinSymbol(arity, pos, neg)
    return BuiltinInterpretation(spec, symbols)


def builtins_to_doc(rho: BuiltinInterpretation) -> dict:
    spec = rho.spec
    out = {}
    for name, sym in rho.symbols.items():
        entry: dict[str, Any] = {"arity": sym.arity}
        for pol, fam in (("positive", sym.positive), ("negative", sym.negative)):
            if fam.description is not None and "generator" in fam.description:
                entry[pol] = dict(fam.description)
            elif fam.fn is None:
                entry[pol] = {
                    "tables": {
                        str(n): {",".join(map(str, k)): spec.format(v) for k, v in t.items()}
                        for n, t in fam.tables.items()
                    }
                }
                if fam.default is not None:
                    entry[pol]["default"] = spec.format(fam.default)
            else:
                raise FileFormatError(f"built-in {name} is a closure and cannot be written out")
        out[name] = entry
    return {"semiring": spec.name, "builtins": out}


def dump_json(doc: dict, path) -> None:
    Path(path).write_text(json.dumps(doc, indent=2, sort_keys=False) + "\n")
