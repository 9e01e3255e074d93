"""First-order logic with semiring semantics."""

from .encoding import (
    DecodeError,
    decode_interpretation,
    decode_universe_size,
    encode_interpretation,
    encoding_length,
    literal_position,
)
from .evaluator import EvalStats, EvaluationError, call_bound, evaluate, value_of
from .interpretation import (
    BuiltinFamily,
    BuiltinInterpretation,
    BuiltinSymbol,
    Interpretation,
    InterpretationError,
    canonical_boolean,
    generated_family,
    indicator_symbol,
    is_model_defining,
    xi_interpretation,
)
from .parser import ParseError, parse_formula
from .rewrites import eliminate_comparisons_boolean, nnf_negate
from .syntax import (
    And,
    Atom,
    BuiltinAtom,
    Compare,
    Exists,
    Forall,
    Formula,
    FormulaError,
    NegAtom,
    NegBuiltinAtom,
    Or,
    VarEq,
    VarNeq,
    Vocabulary,
    free_vars,
    is_sentence,
    strict_violations,
    to_text,
)
