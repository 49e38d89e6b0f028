"""
VSBraid - Markov Moves
=======================
Moves that change a braid without changing its closure, on words whose strand
count may change, and the bounded search that strings them together with the
ordinary relations.

  ConjReal(i, +-1), ConjVirtual(i), CommuteSingular(i)
      g w  ->  w g                          (Forward; Inverse moves g back)
  StabVirtualRight / StabRealRight(+-1)
      w  ->  w v_n  /  w s_n^{+-1}          on n+1 strands
  DestabRight
      drops a trailing v_n or s_n^{+-1} (the only letter of index n)
  UnderThreadRight
      w  ->  w S_n v_{n-1} s_n              on n+1 strands
  UnderThreadLeft
      w  ->  i(w) s_1 v_2 S_1               i = shift every index up by one
  RsThreadRight(+-1)
      w t_n v_{n-1} s_n^{+-1}  <->  w s_n^{+-1} v_{n-1} t_n
  RsThreadLeft(+-1)
      i(w) t_1 v_2 s_1^{+-1}  <->  i(w) s_1^{+-1} v_2 t_1

Every move keeps tau_count and closure_component_count. Only StabRealRight
moves sigma_exponent_sum, by its sign.
"""

import logging
from dataclasses import dataclass, field, replace
from enum import Enum
from pathlib import Path
from typing import Iterator, List, Optional, Sequence, Set, Tuple, Union

from vsb import config
from vsb.errors import PreconditionError, ScriptFormatError, WordParseError
from vsb.relations import relation_set
from vsb.rewriting import RewriteStep, RuleIndex, apply_relation
from vsb.search import Equivalent, NotFoundWithinBudget, SearchBudget, bidirectional_search
from vsb.verdicts import Invalid, Valid
from vsb.words import (
    BraidWord,
    GeneratorLetter,
    LetterKind,
    Letters,
    closure_component_count,
    format_word,
    parse_word,
    read_json,
    sigma,
    sigma_inv,
    tau,
    tau_count,
    virtual,
)

log = logging.getLogger(__name__)


class MarkovKind(str, Enum):
    CONJ_REAL = "ConjReal"
    CONJ_VIRTUAL = "ConjVirtual"
    COMMUTE_SINGULAR = "CommuteSingular"
    STAB_REAL_RIGHT = "StabRealRight"
    STAB_VIRTUAL_RIGHT = "StabVirtualRight"
    DESTAB_RIGHT = "DestabRight"
    UNDER_THREAD_RIGHT = "UnderThreadRight"
    UNDER_THREAD_LEFT = "UnderThreadLeft"
    RS_THREAD_RIGHT = "RsThreadRight"
    RS_THREAD_LEFT = "RsThreadLeft"


class MoveDirection(str, Enum):
    FORWARD = "Forward"
    INVERSE = "Inverse"

    def flipped(self) -> "MoveDirection":
        return MoveDirection.INVERSE if self is MoveDirection.FORWARD else MoveDirection.FORWARD


_SIGNED = {MarkovKind.CONJ_REAL, MarkovKind.STAB_REAL_RIGHT, MarkovKind.RS_THREAD_RIGHT, MarkovKind.RS_THREAD_LEFT}
_INDEXED = {MarkovKind.CONJ_REAL, MarkovKind.CONJ_VIRTUAL, MarkovKind.COMMUTE_SINGULAR}


@dataclass(frozen=True)
class MarkovMove:
    kind: MarkovKind
    direction: MoveDirection = MoveDirection.FORWARD
    sign: Optional[int] = None
    index: Optional[int] = None

    def __post_init__(self):
        kind = MarkovKind(self.kind)
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "direction", MoveDirection(self.direction))
        if kind in _SIGNED:
            if self.sign not in (1, -1):
                raise PreconditionError(f"{kind.value} needs sign +1 or -1, got {self.sign}")
        elif self.sign is not None:
            raise PreconditionError(f"{kind.value} takes no sign")
        if kind in _INDEXED:
            if self.index is None or self.index < 1:
                raise PreconditionError(f"{kind.value} needs a strand index >= 1")
        elif self.index is not None:
            raise PreconditionError(f"{kind.value} takes no index")

    def reversed(self) -> "MarkovMove":
        return MarkovMove(self.kind, self.direction.flipped(), self.sign, self.index)

    def to_json(self) -> dict:
        return {"move": self.kind.value, "direction": self.direction.value, "sign": self.sign, "index": self.index}

    @classmethod
    def from_json(cls, data: dict) -> "MarkovMove":
        try:
            return cls(MarkovKind(data["move"]), MoveDirection(data.get("direction", "Forward")), data.get("sign"), data.get("index"))
        except (KeyError, ValueError, TypeError) as e:
            raise ScriptFormatError(f"malformed Markov move {data!r}: {e}") from e

    def __str__(self) -> str:
        params = [str(p) for p in (self.index, self.sign) if p is not None]
        head = f"{self.kind.value}({','.join(params)})" if params else self.kind.value
        return f"{head} {self.direction.value}"


# ---------------------------------------------------------------------------
# Embeddings
# ---------------------------------------------------------------------------

def left_shift(w: BraidWord) -> BraidWord:
    return BraidWord(w.n + 1, tuple(letter.shifted(1) for letter in w.letters))


def embed_right(w: BraidWord) -> BraidWord:
    return BraidWord(w.n + 1, w.letters)


def _uses_index(letters: Sequence[GeneratorLetter], index: int) -> bool:
    return any(letter.index == index for letter in letters)


# ---------------------------------------------------------------------------
# Moves
# ---------------------------------------------------------------------------

def _conjugator(move: MarkovMove) -> GeneratorLetter:
    i = move.index
    if move.kind is MarkovKind.CONJ_REAL:
        return sigma(i) if move.sign == 1 else sigma_inv(i)
    if move.kind is MarkovKind.CONJ_VIRTUAL:
        return virtual(i)
    return tau(i)


def _real(index: int, sign: int) -> GeneratorLetter:
    return sigma(index) if sign == 1 else sigma_inv(index)


def _drop_trailing(w: BraidWord, allowed: Sequence[GeneratorLetter], name: str) -> BraidWord:
    m = w.n
    if m < 2 or not w.letters or w.letters[-1] not in allowed:
        wanted = " or ".join(letter.token for letter in allowed) if m >= 2 else "a letter of index n-1"
        raise PreconditionError(f"{name}: word must end with {wanted}")
    rest = w.letters[:-1]
    if _uses_index(rest, m - 1):
        raise PreconditionError(f"{name}: another letter of index {m - 1} remains")
    return BraidWord(m - 1, rest)


def _rs_swap(letters: Letters, prefix_len: int, source: Letters, target: Letters, name: str) -> Letters:
    if len(letters) < 3 or letters[-3:] != source:
        raise PreconditionError(f"{name}: word must end with {' '.join(x.token for x in source)}")
    return letters[:prefix_len] + target


def apply_markov(w: BraidWord, move: MarkovMove) -> BraidWord:
    kind, forward = move.kind, move.direction is MoveDirection.FORWARD
    n, letters = w.n, w.letters

    if kind in _INDEXED:
        if move.index > n - 1:
            raise PreconditionError(f"{move}: index {move.index} needs more than {n} strands")
        g = _conjugator(move)
        if forward:
            if not letters or letters[0] != g:
                raise PreconditionError(f"{move}: word must begin with {g.token}")
            return BraidWord(n, letters[1:] + (g,))
        if not letters or letters[-1] != g:
            raise PreconditionError(f"{move}: word must end with {g.token}")
        return BraidWord(n, (g,) + letters[:-1])

    if kind is MarkovKind.STAB_VIRTUAL_RIGHT:
        if forward:
            return BraidWord(n + 1, letters + (virtual(n),))
        return _drop_trailing(w, (virtual(n - 1),), str(move))

    if kind is MarkovKind.STAB_REAL_RIGHT:
        if forward:
            return BraidWord(n + 1, letters + (_real(n, move.sign),))
        return _drop_trailing(w, (_real(n - 1, move.sign),), str(move))

    if kind is MarkovKind.DESTAB_RIGHT:
        if not forward:
            raise PreconditionError("DestabRight Inverse is ambiguous; use StabVirtualRight or StabRealRight")
        return _drop_trailing(w, (virtual(n - 1), sigma(n - 1), sigma_inv(n - 1)), str(move))

    if kind is MarkovKind.UNDER_THREAD_RIGHT:
        if forward:
            if n < 2:
                raise PreconditionError(f"{move}: needs at least 2 strands")
            return BraidWord(n + 1, letters + (sigma_inv(n), virtual(n - 1), sigma(n)))
        m = n
        if m < 3 or letters[-3:] != (sigma_inv(m - 1), virtual(m - 2), sigma(m - 1)):
            raise PreconditionError(f"{move}: word must end with S{m - 1} v{m - 2} s{m - 1}")
        rest = letters[:-3]
        if _uses_index(rest, m - 1):
            raise PreconditionError(f"{move}: another letter of index {m - 1} remains")
        return BraidWord(m - 1, rest)

    if kind is MarkovKind.UNDER_THREAD_LEFT:
        if forward:
            if n < 2:
                raise PreconditionError(f"{move}: needs at least 2 strands")
            shifted = left_shift(w)
            return BraidWord(n + 1, shifted.letters + (sigma(1), virtual(2), sigma_inv(1)))
        if n < 3 or letters[-3:] != (sigma(1), virtual(2), sigma_inv(1)):
            raise PreconditionError(f"{move}: word must end with s1 v2 S1")
        rest = letters[:-3]
        if _uses_index(rest, 1):
            raise PreconditionError(f"{move}: the rest of the word uses index 1")
        return BraidWord(n - 1, tuple(letter.shifted(-1) for letter in rest))

    # rs-threading, same strand count
    if n < 3:
        raise PreconditionError(f"{move}: needs at least 3 strands")
    if kind is MarkovKind.RS_THREAD_RIGHT:
        k, protected = n - 1, n - 1
        singular_first = (tau(k), virtual(k - 1), _real(k, move.sign))
        real_first = (_real(k, move.sign), virtual(k - 1), tau(k))
    else:
        protected = 1
        singular_first = (tau(1), virtual(2), _real(1, move.sign))
        real_first = (_real(1, move.sign), virtual(2), tau(1))
    source, target = (singular_first, real_first) if forward else (real_first, singular_first)
    out = _rs_swap(letters, len(letters) - 3, source, target, str(move))
    if _uses_index(letters[:-3], protected):
        raise PreconditionError(f"{move}: the rest of the word uses index {protected}")
    return BraidWord(n, out)


# ---------------------------------------------------------------------------
# Traces
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MarkovStep:
    move: MarkovMove

    def reversed(self) -> "MarkovStep":
        return MarkovStep(self.move.reversed())

    def __str__(self) -> str:
        return str(self.move)


TraceStep = Union[MarkovStep, RewriteStep]


def _step_to_json(step: TraceStep) -> dict:
    if isinstance(step, MarkovStep):
        return {"kind": "markov", **step.move.to_json()}
    return {"kind": "relation", **step.to_json()}


def _step_from_json(data: dict) -> TraceStep:
    if not isinstance(data, dict):
        raise ScriptFormatError(f"malformed trace step {data!r}")
    if data.get("kind") == "markov":
        return MarkovStep(MarkovMove.from_json(data))
    if data.get("kind") == "relation":
        return RewriteStep.from_json(data)
    raise ScriptFormatError(f'trace step kind must be "markov" or "relation", got {data.get("kind")!r}')


@dataclass(frozen=True)
class MarkovTrace:
    start: BraidWord
    steps: Tuple[TraceStep, ...] = field(default=())
    end: Optional[BraidWord] = None

    def __len__(self) -> int:
        return len(self.steps)

    def to_json(self) -> dict:
        end = self.end if self.end is not None else self.start
        return {
            "n": self.start.n,
            "start": format_word(self.start),
            "end_n": end.n,
            "end": format_word(end),
            "steps": [_step_to_json(step) for step in self.steps],
        }

    @classmethod
    def from_json(cls, data: dict) -> "MarkovTrace":
        if not isinstance(data, dict) or not all(k in data for k in ("n", "start", "end_n", "end", "steps")):
            raise ScriptFormatError('trace JSON needs "n", "start", "end_n", "end" and "steps"')
        try:
            start = parse_word(data["start"], int(data["n"]))
            end = parse_word(data["end"], int(data["end_n"]))
        except (TypeError, ValueError, WordParseError) as e:
            raise ScriptFormatError(f"trace endpoints: {e}") from e
        return cls(start, tuple(_step_from_json(step) for step in data["steps"]), end)


def load_trace(path: Union[str, Path]) -> MarkovTrace:
    return MarkovTrace.from_json(read_json(path, ScriptFormatError))


def replay_trace(trace: MarkovTrace) -> Union[Valid, Invalid]:
    word = trace.start
    for k, step in enumerate(trace.steps):
        try:
            if isinstance(step, MarkovStep):
                word = apply_markov(word, step.move)
            else:
                word = apply_relation(word, step.relation, step.position, step.direction)
        except PreconditionError as e:
            return Invalid(k, str(e))
    end = trace.end if trace.end is not None else trace.start
    if word != end:
        return Invalid(len(trace.steps), f"replay ends at {format_word(word)} on {word.n} strands")
    return Valid()


# ---------------------------------------------------------------------------
# Search
# ---------------------------------------------------------------------------

_RULES = {}


def _rules(n: int) -> RuleIndex:
    index = _RULES.get(n)
    if index is None:
        index = _RULES[n] = RuleIndex(relation_set(n))
    return index


def _conjugation_move(letter: GeneratorLetter, direction: MoveDirection) -> Optional[MarkovMove]:
    if letter.kind is LetterKind.VIRTUAL:
        return MarkovMove(MarkovKind.CONJ_VIRTUAL, direction, index=letter.index)
    if letter.kind is LetterKind.SINGULAR:
        return MarkovMove(MarkovKind.COMMUTE_SINGULAR, direction, index=letter.index)
    sign = 1 if letter.kind is LetterKind.REAL_POS else -1
    return MarkovMove(MarkovKind.CONJ_REAL, direction, sign=sign, index=letter.index)


def _candidate_moves(w: BraidWord, caps: SearchBudget) -> List[MarkovMove]:
    moves: List[MarkovMove] = []
    if w.letters:
        moves.append(_conjugation_move(w.letters[0], MoveDirection.FORWARD))
        moves.append(_conjugation_move(w.letters[-1], MoveDirection.INVERSE))
    max_strands = caps.max_strands
    room = caps.max_word_length - len(w)
    if w.n + 1 <= max_strands and room >= 1:
        moves.append(MarkovMove(MarkovKind.STAB_VIRTUAL_RIGHT))
        moves.append(MarkovMove(MarkovKind.STAB_REAL_RIGHT, sign=1))
        moves.append(MarkovMove(MarkovKind.STAB_REAL_RIGHT, sign=-1))
    if w.n >= 2 and w.n + 1 <= max_strands and room >= 3:
        moves.append(MarkovMove(MarkovKind.UNDER_THREAD_RIGHT))
        moves.append(MarkovMove(MarkovKind.UNDER_THREAD_LEFT))
    inverse = MoveDirection.INVERSE
    moves.append(MarkovMove(MarkovKind.STAB_VIRTUAL_RIGHT, inverse))
    moves.append(MarkovMove(MarkovKind.STAB_REAL_RIGHT, inverse, sign=1))
    moves.append(MarkovMove(MarkovKind.STAB_REAL_RIGHT, inverse, sign=-1))
    moves.append(MarkovMove(MarkovKind.UNDER_THREAD_RIGHT, inverse))
    moves.append(MarkovMove(MarkovKind.UNDER_THREAD_LEFT, inverse))
    for kind in (MarkovKind.RS_THREAD_RIGHT, MarkovKind.RS_THREAD_LEFT):
        for sign in (1, -1):
            for direction in MoveDirection:
                moves.append(MarkovMove(kind, direction, sign=sign))
    return moves


def _markov_moves(w: BraidWord, caps: SearchBudget) -> Iterator[Tuple[TraceStep, BraidWord]]:
    if w.n >= 2:
        for step, letters in _rules(w.n).moves(w.letters, caps.max_word_length):
            yield step, BraidWord(w.n, letters)
    for move in _candidate_moves(w, caps):
        try:
            yield MarkovStep(move), apply_markov(w, move)
        except PreconditionError:
            continue


def _strand_capped(budget: SearchBudget, *words: BraidWord) -> SearchBudget:
    if budget.max_strands is not None:
        return budget
    return replace(budget, max_strands=max(w.n for w in words) + config.EXTRA_STRANDS)


def markov_neighbors(w: BraidWord, caps: Optional[SearchBudget] = None) -> Set[BraidWord]:
    caps = _strand_capped(caps or SearchBudget.for_words(w), w)
    return {nxt for _, nxt in _markov_moves(w, caps)}


def markov_equivalent_bounded(
    a: BraidWord,
    b: BraidWord,
    budget: Optional[SearchBudget] = None,
) -> Union[Equivalent, NotFoundWithinBudget]:
    if budget is None:
        budget = SearchBudget.for_words(a, b)
    budget = _strand_capped(budget, a, b)
    if a == b:
        return Equivalent(MarkovTrace(a, (), b))
    if tau_count(a) != tau_count(b):
        return NotFoundWithinBudget(0, proven_inequivalent=True, reason="tau counts differ")
    if closure_component_count(a) != closure_component_count(b):
        return NotFoundWithinBudget(0, proven_inequivalent=True, reason="closure component counts differ")

    outcome = bidirectional_search(
        a,
        b,
        expand=lambda w: _markov_moves(w, budget),
        reverse=lambda step: step.reversed(),
        key=BraidWord.sort_key,
        max_states=budget.max_states,
        max_depth=budget.max_depth,
    )
    if outcome.found:
        log.info("[markov] connected in %d steps after %d states", len(outcome.steps), outcome.states_explored)
        return Equivalent(MarkovTrace(a, tuple(outcome.steps), b))
    log.info("[markov] no connection within budget (%d states)", outcome.states_explored)
    return NotFoundWithinBudget(outcome.states_explored)
