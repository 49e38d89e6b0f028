"""
VSBraid - Rewriting Core
=========================
Everything that treats a relation as a pair of words: single rewrites,
one-step neighbourhoods, cancellation with recorded steps, rewrite scripts and
their replay.

A relation is any object with
  family   -> enum whose .value is the family name used in JSON
  params   -> tuple of ints
  sides()  -> (left letters, right letters)
  max_index()
The original presentation and the reduced presentation register their
families here so that scripts can name relations of either kind.

Script JSON:
  {"n": 4, "start": "<tokens>", "end": "<tokens>",
   "steps": [{"rel": "V3r", "params": [1, 2], "pos": 7, "dir": "L2R"}, ...],
   "lemma": "lemma2", "variant": "tau", "indices": [3, 1]}      (last three optional)
"""

import json
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Any, Callable, Dict, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

from vsb.errors import PreconditionError, ScriptFormatError, WordParseError
from vsb.verdicts import Invalid, Valid
from vsb.words import BraidWord, GeneratorLetter, Letters, format_word, parse_word, read_json


class Direction(str, Enum):
    L2R = "L2R"
    R2L = "R2L"

    @classmethod
    def parse(cls, text: str) -> "Direction":
        value = text.strip().upper()
        if value == "EXPAND":
            return cls.R2L
        try:
            return cls(value)
        except ValueError:
            raise PreconditionError(f"direction must be L2R, R2L or expand, got {text!r}") from None

    def flipped(self) -> "Direction":
        return Direction.R2L if self is Direction.L2R else Direction.L2R


# ---------------------------------------------------------------------------
# Family registry
# ---------------------------------------------------------------------------

_FAMILIES: Dict[str, Callable[[Tuple[int, ...]], Any]] = {}


def register_family(name: str, factory: Callable[[Tuple[int, ...]], Any]) -> None:
    _FAMILIES[name] = factory


def make_relation(name: str, params: Sequence[int]):
    factory = _FAMILIES.get(name)
    if factory is None:
        raise PreconditionError(f"unknown relation family {name!r}")
    return factory(tuple(int(p) for p in params))


def parse_relation(text: str):
    """Inverse of str(rel): "R3(1,2)", "VInvol(2)", "BaseR3()"."""
    text = text.strip()
    name, sep, rest = text.partition("(")
    if not sep or not rest.endswith(")"):
        raise PreconditionError(f"relation must look like Family(p1,p2,...), got {text!r}")
    inner = rest[:-1].strip()
    try:
        params = [int(p) for p in inner.split(",")] if inner else []
    except ValueError:
        raise PreconditionError(f"relation parameters must be integers in {text!r}") from None
    return make_relation(name.strip(), params)


def relation_label(rel) -> str:
    return f"{rel.family.value}({','.join(str(p) for p in rel.params)})"


# ---------------------------------------------------------------------------
# Single rewrites
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RewriteStep:
    relation: Any
    position: int
    direction: Direction

    def reversed(self) -> "RewriteStep":
        return RewriteStep(self.relation, self.position, self.direction.flipped())

    def to_json(self) -> dict:
        return {
            "rel": self.relation.family.value,
            "params": list(self.relation.params),
            "pos": self.position,
            "dir": self.direction.value,
        }

    @classmethod
    def from_json(cls, data: dict) -> "RewriteStep":
        try:
            relation = make_relation(data["rel"], data.get("params", []))
            return cls(relation, int(data["pos"]), Direction.parse(data["dir"]))
        except (KeyError, TypeError) as e:
            raise ScriptFormatError(f"malformed step {data!r}") from e
        except PreconditionError as e:
            raise ScriptFormatError(f"malformed step {data!r}: {e}") from e

    def __str__(self) -> str:
        return f"{relation_label(self.relation)} @{self.position} {self.direction.value}"


def apply_relation(w: BraidWord, rel, position: int, direction: Direction) -> BraidWord:
    lhs, rhs = rel.sides()
    if rel.max_index() > w.n - 1:
        raise PreconditionError(f"{relation_label(rel)} needs more than {w.n} strands")
    source, target = (lhs, rhs) if direction is Direction.L2R else (rhs, lhs)
    letters = w.letters
    if not source:
        if not 0 <= position <= len(letters):
            raise PreconditionError(f"no match: insertion point {position} outside 0..{len(letters)}")
    elif position < 0 or letters[position:position + len(source)] != source:
        raise PreconditionError(
            f"no match: {relation_label(rel)} {direction.value} does not occur at position {position}"
        )
    return BraidWord(w.n, letters[:position] + target + letters[position + len(source):])


class RuleIndex:
    """Both directions of every relation, indexed by the first source letter."""

    def __init__(self, rels: Iterable):
        self.by_first: Dict[GeneratorLetter, List[Tuple[Any, Direction, Letters, Letters]]] = {}
        self.insertions: List[Tuple[Any, Direction, Letters]] = []
        self.cancellations: Dict[Letters, Tuple[Any, Direction]] = {}
        seen = set()
        for rel in rels:
            lhs, rhs = rel.sides()
            for direction, source, target in ((Direction.L2R, lhs, rhs), (Direction.R2L, rhs, lhs)):
                if (source, target) in seen:
                    continue
                seen.add((source, target))
                if not source:
                    self.insertions.append((rel, direction, target))
                    continue
                self.by_first.setdefault(source[0], []).append((rel, direction, source, target))
                if len(source) == 2 and not target:
                    self.cancellations.setdefault(source, (rel, direction))

    def moves(self, letters: Letters, max_len: int) -> Iterator[Tuple[RewriteStep, Letters]]:
        size = len(letters)
        for p, letter in enumerate(letters):
            for rel, direction, source, target in self.by_first.get(letter, ()):
                k = len(source)
                if size - k + len(target) > max_len:
                    continue
                if letters[p:p + k] == source:
                    yield RewriteStep(rel, p, direction), letters[:p] + target + letters[p + k:]
        if size + 2 <= max_len:
            for p in range(size + 1):
                for rel, direction, target in self.insertions:
                    if size + len(target) <= max_len:
                        yield RewriteStep(rel, p, direction), letters[:p] + target + letters[p:]

    def cancel(self, letters: Letters) -> Tuple[Letters, List[RewriteStep]]:
        """Leftmost-first deletion of cancelling pairs known to this index."""
        out: List[GeneratorLetter] = []
        steps: List[RewriteStep] = []
        for letter in letters:
            if out:
                rule = self.cancellations.get((out[-1], letter))
                if rule is not None:
                    steps.append(RewriteStep(rule[0], len(out) - 1, rule[1]))
                    out.pop()
                    continue
            out.append(letter)
        return tuple(out), steps


# ---------------------------------------------------------------------------
# Scripts
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RewriteScript:
    n: int
    start: BraidWord
    steps: Tuple[RewriteStep, ...]
    end: BraidWord
    lemma: Optional[str] = None
    variant: Optional[str] = None
    indices: Tuple[int, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "steps", tuple(self.steps))
        object.__setattr__(self, "indices", tuple(self.indices))

    def __len__(self) -> int:
        return len(self.steps)

    def widened(self, n: int) -> "RewriteScript":
        """The same derivation read on n >= self.n strands."""
        if n < self.n:
            raise PreconditionError(f"cannot narrow a script on {self.n} strands to {n}")
        return RewriteScript(
            n, BraidWord(n, self.start.letters), self.steps, BraidWord(n, self.end.letters),
            self.lemma, self.variant, self.indices,
        )

    def inverted(self) -> "RewriteScript":
        """The same derivation read from end back to start."""
        steps = tuple(step.reversed() for step in reversed(self.steps))
        return RewriteScript(self.n, self.end, steps, self.start, self.lemma, self.variant, self.indices)

    def to_json(self) -> dict:
        data = {
            "n": self.n,
            "start": format_word(self.start),
            "end": format_word(self.end),
            "steps": [step.to_json() for step in self.steps],
        }
        if self.lemma:
            data["lemma"] = self.lemma
            data["variant"] = self.variant
            data["indices"] = list(self.indices)
        return data

    @classmethod
    def from_json(cls, data: dict) -> "RewriteScript":
        if not isinstance(data, dict):
            raise ScriptFormatError("script JSON must be an object")
        missing = [k for k in ("n", "start", "end", "steps") if k not in data]
        if missing:
            raise ScriptFormatError(f"script JSON is missing {', '.join(missing)}")
        try:
            n = int(data["n"])
            start = parse_word(data["start"], n)
            end = parse_word(data["end"], n)
        except (TypeError, ValueError, WordParseError) as e:
            raise ScriptFormatError(f"script endpoints: {e}") from e
        if not isinstance(data["steps"], list):
            raise ScriptFormatError('"steps" must be a list')
        steps = tuple(RewriteStep.from_json(step) for step in data["steps"])
        return cls(
            n, start, steps, end,
            lemma=data.get("lemma"),
            variant=data.get("variant"),
            indices=tuple(data.get("indices") or ()),
        )


def load_script(path: Union[str, Path]) -> RewriteScript:
    return RewriteScript.from_json(read_json(path, ScriptFormatError))


def save_script(script: RewriteScript, path: Union[str, Path]) -> None:
    Path(path).write_text(json.dumps(script.to_json(), indent=2, sort_keys=True) + "\n", encoding="utf-8")


def check_rewrite_script(script: RewriteScript, rels: Iterable) -> Union[Valid, Invalid]:
    if script.start.n != script.end.n:
        raise PreconditionError("script start and end have different strand counts")
    allowed = set(rels)
    word = script.start
    for k, step in enumerate(script.steps):
        if step.relation not in allowed:
            return Invalid(k, f"{relation_label(step.relation)} is not in the supplied relation set")
        try:
            word = apply_relation(word, step.relation, step.position, step.direction)
        except PreconditionError as e:
            return Invalid(k, str(e))
    if word != script.end:
        return Invalid(len(script.steps), f"replay ends at {format_word(word)}, script claims {format_word(script.end)}")
    return Valid()


def shifted_steps(steps: Iterable[RewriteStep], offset: int) -> Tuple[RewriteStep, ...]:
    """Steps of a derivation on a subword, replayed offset letters further right."""
    return tuple(RewriteStep(step.relation, step.position + offset, step.direction) for step in steps)


def mirrored(script: RewriteScript, rels: Iterable) -> RewriteScript:
    """The derivation between the reversed words, each step read right to left.

    Every step needs a relation in rels whose sides are its own sides reversed.
    """
    by_sides: Dict[Tuple[Letters, Letters], Tuple[Any, Direction]] = {}
    for rel in rels:
        lhs, rhs = rel.sides()
        by_sides.setdefault((lhs, rhs), (rel, Direction.L2R))
        by_sides.setdefault((rhs, lhs), (rel, Direction.R2L))
    word = script.start
    steps = []
    for step in script.steps:
        lhs, rhs = step.relation.sides()
        source, target = (lhs, rhs) if step.direction is Direction.L2R else (rhs, lhs)
        found = by_sides.get((source[::-1], target[::-1]))
        if found is None:
            raise PreconditionError(f"{relation_label(step.relation)} has no mirror image in the relation set")
        steps.append(RewriteStep(found[0], len(word) - step.position - len(source), found[1]))
        word = apply_relation(word, step.relation, step.position, step.direction)
    return RewriteScript(
        script.n,
        BraidWord(script.n, script.start.letters[::-1]),
        tuple(steps),
        BraidWord(script.n, script.end.letters[::-1]),
        script.lemma, script.variant, script.indices,
    )
