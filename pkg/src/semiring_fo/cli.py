"""Command-line front end.

Results go to stdout, diagnostics to stderr. Every error exits with status 1
(2 for usage errors, from argparse).
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from pathlib import Path

from . import circuits as C
from . import compiler
from .logic import (
    EvaluationError,
    FormulaError,
    InterpretationError,
    Vocabulary,
    call_bound,
    decode_universe_size,
    encode_interpretation,
    evaluate,
    parse_formula,
    strict_violations,
    to_text,
)
from .logic.encoding import DecodeError
from .logic.files import (
    FileFormatError,
    builtins_to_doc,
    dump_json,
    load_builtins,
    load_interpretation,
)
from .machines import (
    MachineError,
    StepLimitExceeded,
    ktm_run,
    ktm_to_bss,
    load_ktm,
    load_program,
    output_of,
    save_program,
)
from .machines.bss import input_state, run_state
from .semiring import (
    Semiring,
    SemiringError,
    check_laws,
    get_semiring,
    random_element,
    sample_set,
)


class CliError(Exception):
    pass


def _err(msg: str) -> None:
    print(f"error: {msg}", file=sys.stderr)


def _note(msg: str) -> None:
    print(msg, file=sys.stderr)


def _existing(path: str) -> Path:
    p = Path(path)
    if not p.is_file():
        raise CliError(f"{path}: no such file")
    return p


def _spec(args, *file_specs) -> Semiring | None:
    """The single semiring of this invocation; files must agree with it."""
    chosen = get_semiring(args.semiring) if args.semiring else None
    for where, name in file_specs:
        if name is None:
            continue
        s = get_semiring(name)
        if chosen is None:
            chosen = s
        elif s is not chosen:
            raise CliError(f"{where} is over {s.name}, but this invocation uses {chosen.name}")
    return chosen


def _json(path: Path) -> dict:
    try:
        return json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise CliError(f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None


def _elements(spec: Semiring, text: str | None) -> list:
    if not text:
        return []
    return [spec.parse(t) for t in text.split(",")]


def _relations(text: str) -> dict:
    out = {}
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        name, _, ar = part.partition(":")
        try:
            out[name.strip()] = int(ar) if ar else 1
        except ValueError:
            raise CliError(f"bad relation spec {part!r}; expected NAME:ARITY") from None
    return out


def _show(spec: Semiring, values) -> str:
    return "(" + ", ".join(v if isinstance(v, str) else spec.format(v) for v in values) + ")"


def _tracer(args):
    if not getattr(args, "trace", False):
        return None
    return lambda line: print(line, file=sys.stderr)


def _read_formula(path: Path, vocab: Vocabulary, strict: bool):
    try:
        phi = parse_formula(path.read_text(), vocab)
    except FormulaError as exc:
        raise CliError(f"{path}: {exc}") from None
    if strict:
        problems = strict_violations(phi)
        if problems:
            raise CliError(f"{path}: outside the strict grammar: {'; '.join(problems)}")
    return phi


def _builtin_arities(doc: dict) -> dict:
    return {name: int(e["arity"]) for name, e in doc.get("builtins", {}).items()}


# ---------------------------------------------------------------------------
# eval / encode / decode-size


def cmd_eval(args) -> int:
    ipath = _existing(args.interpretation)
    fpath = _existing(args.formula)
    idoc = _json(ipath)
    bdoc = _json(_existing(args.builtins)) if args.builtins else None
    spec = _spec(args, (str(ipath), idoc.get("semiring")),
                 (args.builtins, bdoc.get("semiring") if bdoc else None))
    rho = load_builtins(bdoc, spec) if bdoc else None
    pi = load_interpretation(idoc, spec, _builtin_arities(bdoc) if bdoc else None)
    phi = _read_formula(fpath, pi.vocab, args.strict_grammar)
    s = {}
    for item in args.assign or []:
        var, _, a = item.partition("=")
        if not _:
            raise CliError(f"bad assignment {item!r}; expected VAR=ELEMENT")
        s[var.strip()] = a.strip()
    value, stats = evaluate(phi, pi, rho, s, short_circuit=args.short_circuit)
    print(pi.spec.format(value))
    if args.mc:
        print(f"model-checking: {'yes' if value != pi.spec.zero else 'no'}")
    if args.stats:
        for k, v in stats.as_dict().items():
            print(f"{k}: {v}")
        print(f"call bound: {call_bound(phi, len(pi.universe))}")
    return 0


def cmd_encode(args) -> int:
    ipath = _existing(args.interpretation)
    idoc = _json(ipath)
    spec = _spec(args, (str(ipath), idoc.get("semiring")))
    pi = load_interpretation(idoc, spec)
    vec = encode_interpretation(pi)
    print(" ".join(pi.spec.format(v) for v in vec))
    _note(f"length {len(vec)}, universe size {len(pi.universe)}")
    return 0


def cmd_decode_size(args) -> int:
    vocab = Vocabulary.of(_relations(args.relations))
    n, probes = decode_universe_size(args.length, vocab, with_probes=True)
    print(n)
    _note(f"{probes} probes")
    return 0


# ---------------------------------------------------------------------------
# compile / circuit-eval


def _verify_circuit(phi, vocab, n, spec, rho, circuit, k, rng) -> bool:
    from .logic import Interpretation

    universe = [str(i) for i in range(1, n + 1)]
    for _ in range(k):
        pi = Interpretation.from_function(spec, universe, vocab,
                                          lambda *_: random_element(spec, rng))
        want, _ = evaluate(phi, pi, rho)
        got = C.evaluate_circuit(circuit, encode_interpretation(pi))[0]
        if got != want:
            _note(f"mismatch: formula gives {spec.format(want)}, circuit gives {spec.format(got)}")
            return False
    return True


def _verify_formula(compiled, circuit, k, rng) -> bool:
    spec = circuit.spec
    for _ in range(k):
        xs = [random_element(spec, rng) for _ in circuit.inputs]
        want = C.evaluate_circuit(circuit, xs)[0]
        got, _ = evaluate(compiled.formula, compiled.interpretation(xs), compiled.builtins,
                          short_circuit=True)
        if got != want:
            _note(f"mismatch on {_show(spec, xs)}: circuit {spec.format(want)}, "
                  f"formula {spec.format(got)}")
            return False
    return True


def cmd_compile(args) -> int:
    src = _existing(args.source)
    rng = random.Random(args.seed)
    if args.to == "circuit":
        if args.n is None:
            raise CliError("--n is required with --to circuit")
        bdoc = _json(_existing(args.builtins)) if args.builtins else None
        spec = _spec(args, (args.builtins, bdoc.get("semiring") if bdoc else None))
        if spec is None:
            raise CliError("name a semiring with --semiring")
        rho = load_builtins(bdoc, spec) if bdoc else None
        vocab = Vocabulary.of(_relations(args.relations or ""),
                              _builtin_arities(bdoc) if bdoc else None)
        phi = _read_formula(src, vocab, args.strict_grammar)
        circuit = compiler.formula_to_circuit(phi, vocab, args.n, spec, rho)
        size, depth = C.measure(circuit)
        out = Path(args.output or "circuit.json")
        C.save_circuit(circuit, out)
        print(f"wrote {out}: size {size}, depth {depth}")
        if args.verify:
            ok = _verify_circuit(phi, vocab, args.n, spec, rho, circuit, args.verify, rng)
            print(f"verify: {'pass' if ok else 'fail'} ({args.verify} random interpretations)")
            return 0 if ok else 1
        return 0

    doc = _json(src)
    spec = _spec(args, (str(src), doc.get("semiring")))
    circuit = C.circuit_from_doc(doc, spec)
    if not C.is_tree_normal(C.check(circuit)):
        _note("note: circuit is not normalized; normalizing first")
        circuit = C.normalize_to_tree(circuit)
    compiled = compiler.circuit_to_formula(circuit, args.q)
    out = Path(args.output or "formula.fo")
    bout = Path(args.builtins_out or out.with_suffix(".builtins.json"))
    out.write_text(to_text(compiled.formula) + "\n")
    dump_json(builtins_to_doc(compiled.builtins), bout)
    print(f"wrote {out} and {bout}: universe size {compiled.universe_size}, "
          f"q {compiled.encoding.q}")
    if args.verify:
        ok = _verify_formula(compiled, circuit, args.verify, rng)
        print(f"verify: {'pass' if ok else 'fail'} ({args.verify} random inputs)")
        return 0 if ok else 1
    return 0


def cmd_circuit_eval(args) -> int:
    path = _existing(args.circuit)
    doc = _json(path)
    spec = _spec(args, (str(path), doc.get("semiring")))
    circuit = C.check(C.circuit_from_doc(doc, spec))
    if args.dot:
        print(C.to_dot(circuit))
        return 0
    xs = _elements(circuit.spec, args.input)
    print(_show(circuit.spec, C.evaluate_circuit(circuit, xs)))
    size, depth = C.measure(circuit)
    _note(f"size {size}, depth {depth}")
    return 0


# ---------------------------------------------------------------------------
# machines


def _report(out_vec, stats, spec):
    print(_show(spec, out_vec))
    print(f"steps: {stats.steps}")
    print(f"span: {stats.span}")


def cmd_bss_run(args) -> int:
    path = _existing(args.program)
    doc = _json(path)
    spec = _spec(args, (str(path), doc.get("semiring")))
    if spec is None:
        raise CliError("name a semiring with --semiring")
    prog = load_program(path)
    state = input_state(spec, _elements(spec, args.input))
    stats = run_state(prog, spec, state, step_limit=args.step_limit, trace=_tracer(args))
    _report(output_of(state), stats, spec)
    if args.show_state:
        span = state.nonzero_span()
        if span is None:
            print("state: all zero")
        else:
            lo, hi = min(span[0], 1), max(span[1], 1)
            print(f"state x_{lo}..x_{hi}: {_show(spec, state.region(lo, hi))}")
    return 0


def _ktm_inputs(p, spec, text):
    if not text:
        return []
    return [t if t in p.input_alphabet else spec.parse(t) for t in text.split(",")]


def cmd_ktm_run(args) -> int:
    path = _existing(args.program)
    p = load_ktm(path)
    spec = _spec(args, (str(path), p.semiring))
    if spec is None:
        raise CliError("name a semiring with --semiring")
    out, stats = ktm_run(p, _ktm_inputs(p, spec, args.input), spec,
                         step_limit=args.step_limit, trace=_tracer(args))
    _report(out, stats, spec)
    print(f"halt: {stats.halt_reason}")
    return 0


def cmd_ktm_compile(args) -> int:
    path = _existing(args.program)
    p = load_ktm(path)
    spec = _spec(args, (str(path), p.semiring))
    prog = ktm_to_bss(p, spec)
    out = Path(args.output or path.with_suffix(".bss.json"))
    save_program(prog, out)
    if spec is not None:
        doc = _json(out)
        doc["semiring"] = spec.name
        out.write_text(json.dumps(doc, indent=1) + "\n")
    print(f"wrote {out}: {len(prog.nodes)} nodes")
    print(f"c: {prog.meta['c']}")
    return 0


def cmd_check_laws(args) -> int:
    if not args.semiring:
        raise CliError("name a semiring with --semiring")
    spec = get_semiring(args.semiring)
    samples = sample_set(spec)
    rng = random.Random(args.seed)
    samples += [random_element(spec, rng) for _ in range(args.random)]
    report = check_laws(spec, samples)
    for law in report.checked:
        bad = [v for v in report.violations if v.law == law]
        print(f"{law}: {'violated ' + str(bad[0].witness) if bad else 'ok'}")
    print(f"positive: {spec.positive}, ordered: {spec.ordered}")
    return 0 if report.ok else 1


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--semiring", help="boolean, natural, tropical, lukasiewicz, probability, polynomial")
    common.add_argument("--step-limit", type=int, default=10**7)
    common.add_argument("--trace", action="store_true", help="one line per machine step on stderr")

    ap = argparse.ArgumentParser(prog="semiring-fo",
                                 description="Semiring semantics for FO, circuits and machines.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", parents=[common], help="evaluate a formula under an interpretation")
    p.add_argument("formula")
    p.add_argument("interpretation")
    p.add_argument("--builtins")
    p.add_argument("--assign", action="append", metavar="VAR=ELEMENT")
    p.add_argument("--stats", action="store_true")
    p.add_argument("--mc", action="store_true", help="also print whether the value is nonzero")
    p.add_argument("--strict-grammar", action="store_true")
    p.add_argument("--short-circuit", action="store_true")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("encode", parents=[common], help="print enc(π)")
    p.add_argument("interpretation")
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("decode-size", parents=[common], help="universe size from an encoding length")
    p.add_argument("length", type=int)
    p.add_argument("--relations", required=True, metavar="P:1,Q:2")
    p.set_defaults(func=cmd_decode_size)

    p = sub.add_parser("compile", parents=[common], help="formula to circuit or circuit to formula")
    p.add_argument("source")
    p.add_argument("--to", choices=("circuit", "formula"), required=True)
    p.add_argument("--n", type=int, help="universe size (to circuit)")
    p.add_argument("--relations", metavar="P:1,Q:2", help="input vocabulary (to circuit)")
    p.add_argument("--builtins", help="built-in interpretation file (to circuit)")
    p.add_argument("--q", type=int, help="tuple length for gate names (to formula)")
    p.add_argument("-o", "--output")
    p.add_argument("--builtins-out")
    p.add_argument("--verify", type=int, default=0, metavar="K")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--strict-grammar", action="store_true")
    p.set_defaults(func=cmd_compile)

    p = sub.add_parser("circuit-eval", parents=[common], help="evaluate a circuit")
    p.add_argument("circuit")
    p.add_argument("--input", metavar="A,B,...")
    p.add_argument("--dot", action="store_true", help="print Graphviz instead")
    p.set_defaults(func=cmd_circuit_eval)

    p = sub.add_parser("bss-run", parents=[common], help="run a BSS program")
    p.add_argument("program")
    p.add_argument("--input", metavar="A,B,...")
    p.add_argument("--show-state", action="store_true")
    p.set_defaults(func=cmd_bss_run)

    p = sub.add_parser("ktm-run", parents=[common], help="run a K-Turing machine")
    p.add_argument("program")
    p.add_argument("--input", metavar="A,B,...")
    p.set_defaults(func=cmd_ktm_run)

    p = sub.add_parser("ktm-compile", parents=[common], help="compile a K-TM to a BSS program")
    p.add_argument("program")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_ktm_compile)

    p = sub.add_parser("check-laws", parents=[common], help="check the semiring axioms on samples")
    p.add_argument("--random", type=int, default=6, help="extra random samples")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_check_laws)
    return ap


_EXPECTED = (CliError, FormulaError, FileFormatError, InterpretationError, EvaluationError,
             DecodeError, compiler.CompileError, C.CircuitError, MachineError, SemiringError,
             ValueError, TypeError)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except StepLimitExceeded as exc:
        _err(str(exc))
        return 1
    except _EXPECTED as exc:
        _err(str(exc))
        return 1


if __name__ == "__main__":
    sys.exit(main())
