"""
VSBraid - Command Line
=======================
Every library operation behind one subcommand.

Usage:
    python cli.py normalize -n 2 "s1 S1 t1"
    python cli.py equiv -n 3 "s1 s2 s1" "s2 s1 s2" --json
    python cli.py verify-lemmas --all -n 5
    python cli.py braid knot.json

Words are given inline in the token grammar ("s1 S2 t1 v3", "1" for the
empty word), as "-" to read stdin, or as @path.json for a word JSON file.
Diagrams and scripts are paths to JSON files.

Exit codes:
    0  success
    1  bad input, precondition violation, Invalid verdict, failing random suite
    2  not found within budget (equiv, markov-equiv, verify-*)
"""

import argparse
import contextlib
import io
import json
import logging
import sys
from typing import List, Optional, Sequence, Tuple

from vsb import config
from vsb.diagram import braid, close, diagram_to_json, invariants, load_diagram, validate
from vsb.errors import BraidError, WordParseError
from vsb.lemmas import (
    VerifyMode,
    normalize_variant,
    parse_lemma,
    summarize,
    verify_all,
    verify_lemma,
    verify_reduction,
)
from vsb.markov import (
    MarkovKind,
    MarkovMove,
    MoveDirection,
    apply_markov,
    embed_right,
    left_shift,
    load_trace,
    markov_equivalent_bounded,
    markov_neighbors,
    replay_trace,
)
from vsb.randomized import DEFAULT_SEED, SUITES, run_suites
from vsb.reduced import (
    expand_to_reduced,
    reduced_relation_set,
    shift_identity_sides,
    verify_shift_identity,
    virtual_reduced_relation_set,
)
from vsb.relations import equivalent_bounded, neighbors, relation_set, virtual_relation_set
from vsb.rewriting import Direction, apply_relation, check_rewrite_script, load_script, parse_relation
from vsb.search import SearchBudget
from vsb.words import (
    BraidWord,
    closure_component_count,
    compose,
    format_letters,
    free_reduce,
    invert,
    load_word,
    parse_word,
    permutation_image,
    sigma_exponent_sum,
    tau_count,
    word_to_json,
)

# library operation -> subcommand
OPERATIONS = {
    "parse_word": "parse",
    "compose": "compose",
    "invert": "invert",
    "free_reduce": "normalize",
    "permutation_image": "perm",
    "tau_count": "counts",
    "sigma_exponent_sum": "counts",
    "closure_component_count": "counts",
    "relation_set": "relations",
    "apply_relation": "apply",
    "neighbors": "neighbors",
    "equivalent_bounded": "equiv",
    "expand_to_reduced": "expand",
    "reduced_relation_set": "reduced-relations",
    "check_rewrite_script": "check-script",
    "verify_shift_identity": "verify-shift",
    "verify_lemma": "verify-lemmas",
    "verify_reduction": "verify-reduction",
    "validate": "validate",
    "close": "close",
    "invariants": "invariants",
    "braid": "braid",
    "left_shift": "shift",
    "embed_right": "widen",
    "apply_markov": "markov",
    "markov_neighbors": "markov-neighbors",
    "markov_equivalent_bounded": "markov-equiv",
    "replay_trace": "check-trace",
    "suites": "random-test",
}

EXIT_OK, EXIT_ERROR, EXIT_NOT_FOUND = 0, 1, 2


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(f"{self.prog}: {message}")


# ---------------------------------------------------------------------------
# Helpers
# ---------------------------------------------------------------------------

class Output:
    def __init__(self, as_json: bool):
        self.as_json = as_json
        self.lines: List[str] = []

    def text(self, line: str = "") -> None:
        self.lines.append(line)

    def data(self, payload) -> None:
        self.lines.append(json.dumps(payload, sort_keys=True))

    def emit(self, payload, *text_lines: str) -> None:
        if self.as_json:
            self.data(payload)
        else:
            self.lines.extend(text_lines)

    def render(self) -> bytes:
        return ("\n".join(self.lines) + "\n").encode("utf-8") if self.lines else b""


def _read_word(text: str, n: int, stdin: bytes) -> BraidWord:
    if text == "-":
        try:
            text = stdin.decode("utf-8").strip()
        except UnicodeDecodeError as e:
            raise WordParseError("stdin: not UTF-8 text") from e
    if text.startswith("@"):
        w = load_word(text[1:])
        if w.n != n:
            raise BraidError(f"{text[1:]} holds a word on {w.n} strands, -n says {n}")
        return w
    return parse_word(text, n)


def _shown(w: BraidWord) -> str:
    return f"n={w.n} {format_letters(w.letters)}"


def _budget(args, *words: BraidWord) -> SearchBudget:
    return SearchBudget.for_words(
        *words,
        max_word_length=args.max_len,
        max_states=args.max_states,
        max_depth=args.max_depth,
        max_strands=args.max_strands,
    )


def _relations(name: str, n: int) -> list:
    if name == "original":
        return relation_set(n)
    if name == "virtual":
        return virtual_relation_set(n)
    if name == "reduced":
        return reduced_relation_set(n)
    return relation_set(n) + reduced_relation_set(n)


def _relation_lines(rels) -> Tuple[list, List[str]]:
    payload, lines = [], []
    for rel in rels:
        lhs, rhs = (format_letters(side) for side in rel.sides())
        payload.append({"relation": str(rel), "lhs": lhs, "rhs": rhs})
        lines.append(f"{rel}: {lhs} = {rhs}")
    return payload, lines


def _verdict_json(verdict) -> dict:
    data = {"verdict": type(verdict).__name__}
    data.update({k: v for k, v in vars(verdict).items()})
    return data


def _indices(text: str) -> Tuple[int, ...]:
    try:
        return tuple(int(part) for part in text.split(",") if part.strip())
    except ValueError:
        raise BraidError(f"indices must look like 3,1 - got {text!r}") from None


def _search_result(out: Output, result, witness_json) -> int:
    if result.found:
        witness = result.witness
        out.emit(
            {"result": "Equivalent", "witness": witness_json(witness)},
            f"Equivalent ({len(witness)} steps)",
            *(f"  {step}" for step in witness.steps),
        )
        return EXIT_OK
    payload = {
        "result": "NotFoundWithinBudget",
        "states_explored": result.states_explored,
        "proven_inequivalent": result.proven_inequivalent,
        "reason": result.reason,
    }
    line = f"NotFoundWithinBudget ({result.states_explored} states)"
    if result.proven_inequivalent:
        line += f"; never equivalent: {result.reason}"
    out.emit(payload, line)
    return EXIT_NOT_FOUND


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def cmd_parse(args, out, stdin):
    w = _read_word(args.word, args.n, stdin)
    out.emit(word_to_json(w), format_letters(w.letters))


def cmd_compose(args, out, stdin):
    w = compose(_read_word(args.a, args.n, stdin), _read_word(args.b, args.n, stdin))
    out.emit(word_to_json(w), format_letters(w.letters))


def cmd_invert(args, out, stdin):
    w = invert(_read_word(args.word, args.n, stdin))
    out.emit(word_to_json(w), format_letters(w.letters))


def cmd_normalize(args, out, stdin):
    w = free_reduce(_read_word(args.word, args.n, stdin))
    out.emit(word_to_json(w), format_letters(w.letters))


def cmd_perm(args, out, stdin):
    perm = permutation_image(_read_word(args.word, args.n, stdin))
    cycles = perm.cycles()
    out.emit(
        {"image": list(perm.image), "cycles": [list(c) for c in cycles]},
        str(perm),
    )


def cmd_counts(args, out, stdin):
    w = _read_word(args.word, args.n, stdin)
    counts = {
        "tau_count": tau_count(w),
        "sigma_exponent_sum": sigma_exponent_sum(w),
        "closure_component_count": closure_component_count(w),
    }
    out.emit(counts, *(f"{k} {v}" for k, v in counts.items()))


def cmd_relations(args, out, stdin):
    payload, lines = _relation_lines(_relations(args.rels, args.n))
    out.emit(payload, *lines)


def cmd_reduced_relations(args, out, stdin):
    rels = virtual_reduced_relation_set(args.n) if args.virtual_only else reduced_relation_set(args.n)
    payload, lines = _relation_lines(rels)
    out.emit(payload, *lines)


def cmd_apply(args, out, stdin):
    w = _read_word(args.word, args.n, stdin)
    result = apply_relation(w, parse_relation(args.rel), args.pos, Direction.parse(args.dir))
    out.emit(word_to_json(result), format_letters(result.letters))


def cmd_neighbors(args, out, stdin):
    w = _read_word(args.word, args.n, stdin)
    found = sorted(neighbors(w, _relations(args.rels, w.n), args.max_len), key=BraidWord.sort_key)
    out.emit([format_letters(x.letters) for x in found], *(format_letters(x.letters) for x in found))


def cmd_equiv(args, out, stdin):
    a, b = _read_word(args.a, args.n, stdin), _read_word(args.b, args.n, stdin)
    result = equivalent_bounded(a, b, _relations(args.rels, args.n), _budget(args, a, b))
    return _search_result(out, result, lambda script: script.to_json())


def cmd_expand(args, out, stdin):
    w = expand_to_reduced(_read_word(args.word, args.n, stdin))
    out.emit(word_to_json(w), format_letters(w.letters))


def cmd_check_script(args, out, stdin):
    script = load_script(args.script)
    verdict = check_rewrite_script(script, _relations(args.rels, script.n))
    out.emit(_verdict_json(verdict), str(verdict))
    return EXIT_OK if verdict.ok else EXIT_ERROR


def cmd_verify_shift(args, out, stdin):
    lhs, rhs = shift_identity_sides(args.i, args.j, args.n)
    result = verify_shift_identity(args.i, args.j, args.n, _budget(args, lhs, rhs))
    return _search_result(out, result, lambda script: script.to_json())


def cmd_verify_lemmas(args, out, stdin):
    if args.all:
        results = verify_all(args.n, args.workers)
    else:
        if not args.lemma or not args.indices:
            raise _UsageError("verify-lemmas: give --all, or --lemma and --indices")
        lemma = parse_lemma(args.lemma)
        indices = _indices(args.indices)
        variant = normalize_variant(lemma, args.variant)
        verdict = verify_lemma(lemma, indices, args.n, args.mode, None, variant)
        name = lemma.value + (f"[{variant}]" if variant else "")
        label = f"{name}({','.join(str(k) for k in indices)})"
        out.emit({"lemma": label, **_verdict_json(verdict)}, f"{label}: {verdict}")
        return EXIT_OK if verdict.ok else EXIT_NOT_FOUND
    payload = [{"lemma": r.label, "mode": r.mode.value, **_verdict_json(r.verdict)} for r in results]
    verified, total = summarize(results)
    out.emit(
        {"results": payload, "verified": verified, "total": total},
        *(f"{r.label} {r.mode.value}: {r.verdict}" for r in results),
        f"{verified}/{total} verified",
    )
    return EXIT_OK if verified == total else EXIT_NOT_FOUND


def cmd_verify_reduction(args, out, stdin):
    results = verify_reduction(args.n, args.max_index, workers=args.workers, max_states=args.max_states)
    verified, total = summarize(results)
    out.emit(
        {
            "results": [{"relation": str(r.relation), **_verdict_json(r.verdict)} for r in results],
            "verified": verified,
            "total": total,
        },
        *(f"{r.relation}: {r.verdict}" for r in results),
        f"{verified}/{total} verified",
    )
    return EXIT_OK if verified == total else EXIT_NOT_FOUND


def cmd_validate(args, out, stdin):
    verdict = validate(load_diagram(args.diagram))
    out.emit(_verdict_json(verdict), str(verdict))
    return EXIT_OK if verdict.ok else EXIT_ERROR


def cmd_close(args, out, stdin):
    d = close(_read_word(args.word, args.n, stdin))
    out.data(diagram_to_json(d))


def cmd_invariants(args, out, stdin):
    inv = invariants(load_diagram(args.diagram))
    data = inv.to_json()
    out.emit(data, *(f"{k} {data[k]}" for k in sorted(data)))


def cmd_braid(args, out, stdin):
    w = braid(load_diagram(args.diagram))
    out.emit(word_to_json(w), _shown(w))


def cmd_shift(args, out, stdin):
    w = left_shift(_read_word(args.word, args.n, stdin))
    out.emit(word_to_json(w), _shown(w))


def cmd_widen(args, out, stdin):
    w = embed_right(_read_word(args.word, args.n, stdin))
    out.emit(word_to_json(w), _shown(w))


def cmd_markov(args, out, stdin):
    move = MarkovMove(
        MarkovKind(args.move),
        MoveDirection.INVERSE if args.inverse else MoveDirection.FORWARD,
        args.sign,
        args.index,
    )
    w = apply_markov(_read_word(args.word, args.n, stdin), move)
    out.emit(word_to_json(w), _shown(w))


def cmd_markov_neighbors(args, out, stdin):
    w = _read_word(args.word, args.n, stdin)
    found = sorted(markov_neighbors(w, _budget(args, w)), key=BraidWord.sort_key)
    out.emit([word_to_json(x) for x in found], *(_shown(x) for x in found))


def cmd_markov_equiv(args, out, stdin):
    a = _read_word(args.a, args.n, stdin)
    b = _read_word(args.b, args.m or args.n, stdin)
    result = markov_equivalent_bounded(a, b, _budget(args, a, b))
    return _search_result(out, result, lambda trace: trace.to_json())


def cmd_check_trace(args, out, stdin):
    verdict = replay_trace(load_trace(args.trace))
    out.emit(_verdict_json(verdict), str(verdict))
    return EXIT_OK if verdict.ok else EXIT_ERROR


def cmd_random_test(args, out, stdin):
    reports = run_suites(args.seed, args.suite)
    failed = [r for r in reports if not r.ok]
    out.emit(
        [{"suite": r.name, "checked": r.checked, "failures": r.failures} for r in reports],
        *(str(r) for r in reports),
        *(f"  {msg}" for r in failed for msg in r.failures),
    )
    return EXIT_ERROR if failed else EXIT_OK


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--json", action="store_true", help="JSON output")
    common.add_argument("-v", "--verbose", action="store_true", help="debug logging on stderr")

    strands = _Parser(add_help=False)
    strands.add_argument("-n", type=int, required=True, help="strand count")

    budget = _Parser(add_help=False)
    budget.add_argument("--max-len", type=int, help="longest intermediate word")
    budget.add_argument("--max-states", type=int, help="states stored before giving up")
    budget.add_argument("--max-depth", type=int, help="combined depth of both frontiers")
    budget.add_argument("--max-strands", type=int, help="strand cap for Markov moves")

    rels = _Parser(add_help=False)
    rels.add_argument("--rels", choices=("original", "reduced", "virtual"), default="original")

    parser = _Parser(prog="vsb", description="Virtual singular braid monoid toolkit.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, fn, *parents, help_text=""):
        p = sub.add_parser(name, parents=[common, *parents], help=help_text)
        p.set_defaults(handler=fn)
        return p

    add("parse", cmd_parse, strands, help_text="parse and print a word").add_argument("word")
    p = add("compose", cmd_compose, strands, help_text="a on top of b")
    p.add_argument("a")
    p.add_argument("b")
    add("invert", cmd_invert, strands, help_text="inverse of a word without tau").add_argument("word")
    add("normalize", cmd_normalize, strands, help_text="free reduction").add_argument("word")
    add("perm", cmd_perm, strands, help_text="permutation image").add_argument("word")
    add("counts", cmd_counts, strands, help_text="tau count, sigma sum, closure components").add_argument("word")
    add("relations", cmd_relations, strands, rels, help_text="instantiated relations")
    p = add("reduced-relations", cmd_reduced_relations, strands, help_text="reduced presentation relations")
    p.add_argument("--virtual-only", action="store_true")
    p = add("apply", cmd_apply, strands, help_text="one rewrite")
    p.add_argument("word")
    p.add_argument("--rel", required=True, help='e.g. "R3(1,2)" or "Base23(3,2)"')
    p.add_argument("--pos", type=int, required=True)
    p.add_argument("--dir", default="L2R", help="L2R, R2L or expand")
    p = add("neighbors", cmd_neighbors, strands, rels, help_text="one-step rewrites")
    p.add_argument("word")
    p.add_argument("--max-len", type=int)
    p = add("equiv", cmd_equiv, strands, rels, budget, help_text="bounded equivalence search")
    p.add_argument("a")
    p.add_argument("b")
    add("expand", cmd_expand, strands, help_text="rewrite into the reduced alphabet").add_argument("word")
    p = add("check-script", cmd_check_script, help_text="replay a rewrite script")
    p.add_argument("script")
    p.add_argument("--rels", choices=("original", "reduced", "virtual", "all"), default="all")
    p = add("verify-shift", cmd_verify_shift, strands, budget, help_text="shift identity for |i-j| >= 2")
    p.add_argument("-i", type=int, required=True)
    p.add_argument("-j", type=int, required=True)
    p = add("verify-lemmas", cmd_verify_lemmas, strands, help_text="lemma instances")
    p.add_argument("--all", action="store_true")
    p.add_argument("--lemma")
    p.add_argument("--indices", help="comma separated, e.g. 3,1")
    p.add_argument("--variant")
    p.add_argument("--mode", choices=[m.value for m in VerifyMode])
    p.add_argument("--workers", type=int, default=config.VERIFY_WORKERS)
    p = add("verify-reduction", cmd_verify_reduction, strands, help_text="original relations in the reduced presentation")
    p.add_argument("--max-index", type=int, default=3)
    p.add_argument("--max-states", type=int)
    p.add_argument("--workers", type=int, default=config.VERIFY_WORKERS)
    add("validate", cmd_validate, help_text="check a diagram").add_argument("diagram")
    add("close", cmd_close, strands, help_text="closure diagram of a braid").add_argument("word")
    add("invariants", cmd_invariants, help_text="diagram counts").add_argument("diagram")
    add("braid", cmd_braid, help_text="braid whose closure is the diagram").add_argument("diagram")
    add("shift", cmd_shift, strands, help_text="add a strand on the left").add_argument("word")
    add("widen", cmd_widen, strands, help_text="add a strand on the right").add_argument("word")
    p = add("markov", cmd_markov, strands, help_text="one Markov move")
    p.add_argument("word")
    p.add_argument("--move", required=True, choices=[k.value for k in MarkovKind])
    p.add_argument("--inverse", action="store_true")
    p.add_argument("--sign", type=int, choices=(1, -1))
    p.add_argument("--index", type=int)
    p = add("markov-neighbors", cmd_markov_neighbors, strands, budget, help_text="one Markov move or rewrite")
    p.add_argument("word")
    p = add("markov-equiv", cmd_markov_equiv, strands, budget, help_text="bounded Markov equivalence")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("-m", type=int, help="strand count of b (default: -n)")
    add("check-trace", cmd_check_trace, help_text="replay a Markov trace").add_argument("trace")
    p = add("random-test", cmd_random_test, help_text="seeded conservation suites")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--suite", action="append", choices=sorted(SUITES))
    return parser


# ---------------------------------------------------------------------------
# Entry points
# ---------------------------------------------------------------------------

def _configure_logging(stream, verbose: bool) -> logging.Handler:
    handler = logging.StreamHandler(stream)
    handler.setFormatter(logging.Formatter("%(levelname)s %(name)s %(message)s"))
    logger = logging.getLogger("vsb")
    logger.addHandler(handler)
    logger.setLevel(logging.DEBUG if verbose else getattr(logging, config.LOG_LEVEL, logging.WARNING))
    return handler


def run(argv: Sequence[str], stdin: bytes = b"") -> Tuple[int, bytes, bytes]:
    err = io.StringIO()
    parser = build_parser()
    try:
        with contextlib.redirect_stdout(io.StringIO()) as help_out, contextlib.redirect_stderr(err):
            args = parser.parse_args(list(argv))
    except _UsageError as e:
        return EXIT_ERROR, b"", f"{e}\n".encode("utf-8")
    except SystemExit as e:
        # --help
        return int(e.code or 0), help_out.getvalue().encode("utf-8"), err.getvalue().encode("utf-8")

    out = Output(args.json)
    logger = logging.getLogger("vsb")
    previous = logger.level
    handler = _configure_logging(err, args.verbose)
    try:
        code = args.handler(args, out, stdin) or EXIT_OK
    except _UsageError as e:
        err.write(f"{e}\n")
        return EXIT_ERROR, b"", err.getvalue().encode("utf-8")
    except BraidError as e:
        err.write(f"error: {e}\n")
        return EXIT_ERROR, b"", err.getvalue().encode("utf-8")
    finally:
        logger.removeHandler(handler)
        logger.setLevel(previous)
    return code, out.render(), err.getvalue().encode("utf-8")


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    stdin = sys.stdin.buffer.read() if "-" in argv else b""
    code, out, err = run(argv, stdin)
    sys.stdout.buffer.write(out)
    sys.stderr.buffer.write(err)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
