"""
VSBraid - Word Core
====================
The alphabet of the virtual singular braid monoid, braid words, the ASCII token
grammar, free reduction, and the homomorphic invariants every relation and
Markov move is checked against.

Token grammar (whitespace separated):
    s<i>   sigma_i          (positive real crossing)
    S<i>   sigma_i^-1       (negative real crossing)
    t<i>   tau_i            (singular crossing)
    v<i>   v_i              (virtual crossing)
    1      the identity word

Words are read top to bottom: the first letter is the topmost crossing.
The strand count n is always explicit, never inferred from the indices.
"""

import json
import re
from dataclasses import dataclass
from enum import IntEnum
from pathlib import Path
from typing import Dict, Iterable, List, NamedTuple, Sequence, Tuple, Type, Union

from vsb.errors import BraidError, PreconditionError, WordParseError


class LetterKind(IntEnum):
    REAL_POS = 0
    REAL_NEG = 1
    SINGULAR = 2
    VIRTUAL = 3


TOKEN_PREFIX: Dict[LetterKind, str] = {
    LetterKind.REAL_POS: "s",
    LetterKind.REAL_NEG: "S",
    LetterKind.SINGULAR: "t",
    LetterKind.VIRTUAL: "v",
}
PREFIX_KIND: Dict[str, LetterKind] = {prefix: kind for kind, prefix in TOKEN_PREFIX.items()}

_TOKEN_RE = re.compile(r"^([sStv])([0-9]+)$")


class GeneratorLetter(NamedTuple):
    kind: LetterKind
    index: int

    @property
    def token(self) -> str:
        return f"{TOKEN_PREFIX[self.kind]}{self.index}"

    @property
    def encoding(self) -> int:
        return self.index * 4 + int(self.kind)

    def shifted(self, by: int = 1) -> "GeneratorLetter":
        return GeneratorLetter(self.kind, self.index + by)

    def inverse(self) -> "GeneratorLetter":
        if self.kind is LetterKind.SINGULAR:
            raise PreconditionError(f"{self.token} is singular and has no inverse")
        if self.kind is LetterKind.REAL_POS:
            return GeneratorLetter(LetterKind.REAL_NEG, self.index)
        if self.kind is LetterKind.REAL_NEG:
            return GeneratorLetter(LetterKind.REAL_POS, self.index)
        return self


Letters = Tuple[GeneratorLetter, ...]
LetterLike = Union[GeneratorLetter, Tuple[int, int]]


def sigma(i: int) -> GeneratorLetter:
    return GeneratorLetter(LetterKind.REAL_POS, i)


def sigma_inv(i: int) -> GeneratorLetter:
    return GeneratorLetter(LetterKind.REAL_NEG, i)


def tau(i: int) -> GeneratorLetter:
    return GeneratorLetter(LetterKind.SINGULAR, i)


def virtual(i: int) -> GeneratorLetter:
    return GeneratorLetter(LetterKind.VIRTUAL, i)


def _as_letter(item: LetterLike) -> GeneratorLetter:
    if isinstance(item, GeneratorLetter) and isinstance(item.kind, LetterKind):
        return item
    kind, index = item
    return GeneratorLetter(LetterKind(kind), int(index))


# ---------------------------------------------------------------------------
# Braid words
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BraidWord:
    """A finite word over the generators of VSB_n. The empty word is 1_n."""

    n: int
    letters: Letters = ()

    def __post_init__(self):
        if self.n < 1:
            raise PreconditionError(f"strand count must be >= 1, got {self.n}")
        letters = tuple(_as_letter(item) for item in self.letters)
        for letter in letters:
            if letter.index < 1 or letter.index > self.n - 1:
                raise PreconditionError(
                    f"letter {letter.token} needs index in 1..{self.n - 1} for n={self.n}"
                )
        object.__setattr__(self, "letters", letters)

    def __len__(self) -> int:
        return len(self.letters)

    def __str__(self) -> str:
        return format_word(self)

    def sort_key(self) -> Tuple[int, int, Tuple[int, ...]]:
        return (len(self.letters), self.n, tuple(letter.encoding for letter in self.letters))


def identity(n: int) -> BraidWord:
    return BraidWord(n, ())


def letters_key(letters: Sequence[GeneratorLetter]) -> Tuple[int, Tuple[int, ...]]:
    """Search order: shorter first, then lexicographic on letter encodings."""
    return (len(letters), tuple(letter.encoding for letter in letters))


def max_index(letters: Iterable[GeneratorLetter]) -> int:
    return max((letter.index for letter in letters), default=0)


# ---------------------------------------------------------------------------
# Parsing / formatting
# ---------------------------------------------------------------------------

def parse_letters(text: str) -> Letters:
    """Parse tokens without a strand bound. "1" (alone) is the empty word."""
    tokens = text.split()
    if tokens == ["1"]:
        return ()
    letters = []
    for token in tokens:
        match = _TOKEN_RE.match(token)
        if not match:
            raise WordParseError(f"malformed token {token!r}")
        index = int(match.group(2))
        if index < 1:
            raise WordParseError(f"token {token!r} has index < 1")
        letters.append(GeneratorLetter(PREFIX_KIND[match.group(1)], index))
    return tuple(letters)


def parse_word(text: str, n: int) -> BraidWord:
    if n < 1:
        raise WordParseError(f"strand count must be >= 1, got {n}")
    letters = parse_letters(text)
    for letter in letters:
        if letter.index >= n:
            raise WordParseError(
                f"token {letter.token}: index {letter.index} exceeds n-1={n - 1}"
            )
    return BraidWord(n, letters)


def format_letters(letters: Sequence[GeneratorLetter]) -> str:
    if not letters:
        return "1"
    return " ".join(letter.token for letter in letters)


def format_word(w: BraidWord) -> str:
    return format_letters(w.letters)


def word_to_json(w: BraidWord) -> dict:
    return {"n": w.n, "word": format_word(w)}


def word_from_json(data: dict) -> BraidWord:
    if not isinstance(data, dict) or "n" not in data or "word" not in data:
        raise WordParseError('word JSON needs keys "n" and "word"')
    n, text = data["n"], data["word"]
    if not isinstance(n, int) or isinstance(n, bool) or not isinstance(text, str):
        raise WordParseError('word JSON: "n" must be an integer and "word" a string')
    return parse_word(text, n)


def read_json(path: Union[str, Path], error: Type[BraidError]):
    """JSON file contents; unreadable or undecodable files raise `error`."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise error(f"{path}: cannot read ({e.strerror or e})") from e
    except UnicodeDecodeError as e:
        raise error(f"{path}: not UTF-8 text") from e
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise error(f"{path}: not valid JSON ({e})") from e


def load_word(path: Union[str, Path]) -> BraidWord:
    return word_from_json(read_json(path, WordParseError))


# ---------------------------------------------------------------------------
# Monoid operations
# ---------------------------------------------------------------------------

def compose(a: BraidWord, b: BraidWord) -> BraidWord:
    """a on top of b."""
    if a.n != b.n:
        raise PreconditionError(f"cannot compose words on {a.n} and {b.n} strands")
    return BraidWord(a.n, a.letters + b.letters)


def invert(w: BraidWord) -> BraidWord:
    singular = [letter.token for letter in w.letters if letter.kind is LetterKind.SINGULAR]
    if singular:
        raise PreconditionError(f"word contains {singular[0]}; tau is not invertible")
    return BraidWord(w.n, tuple(letter.inverse() for letter in reversed(w.letters)))


def cancels(first: GeneratorLetter, second: GeneratorLetter) -> bool:
    if first.index != second.index:
        return False
    if first.kind is LetterKind.VIRTUAL:
        return second.kind is LetterKind.VIRTUAL
    return {first.kind, second.kind} == {LetterKind.REAL_POS, LetterKind.REAL_NEG}


def free_reduce(w: BraidWord) -> BraidWord:
    # Scanning with a stack deletes the leftmost cancelling pair at every turn.
    out: List[GeneratorLetter] = []
    for letter in w.letters:
        if out and cancels(out[-1], letter):
            out.pop()
        else:
            out.append(letter)
    return BraidWord(w.n, tuple(out))


# ---------------------------------------------------------------------------
# Invariants
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Permutation:
    """One-line notation: image[p-1] is where position p goes."""

    image: Tuple[int, ...]

    def __post_init__(self):
        image = tuple(int(x) for x in self.image)
        if sorted(image) != list(range(1, len(image) + 1)):
            raise PreconditionError(f"{image} is not a permutation of 1..{len(image)}")
        object.__setattr__(self, "image", image)

    @property
    def n(self) -> int:
        return len(self.image)

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(1, n + 1)))

    def __call__(self, p: int) -> int:
        return self.image[p - 1]

    def then(self, other: "Permutation") -> "Permutation":
        """Apply self, then other."""
        if other.n != self.n:
            raise PreconditionError("permutations on different sets")
        return Permutation(tuple(other(self(p)) for p in range(1, self.n + 1)))

    def cycles(self) -> List[Tuple[int, ...]]:
        seen = set()
        result = []
        for start in range(1, self.n + 1):
            if start in seen:
                continue
            cycle = []
            p = start
            while p not in seen:
                seen.add(p)
                cycle.append(p)
                p = self(p)
            result.append(tuple(cycle))
        return result

    def __str__(self) -> str:
        return " ".join(str(x) for x in self.image)


def permutation_image(w: BraidWord) -> Permutation:
    """Scan top to bottom; pi(top position) = bottom position."""
    arrangement = list(range(1, w.n + 1))
    for letter in w.letters:
        i = letter.index
        arrangement[i - 1], arrangement[i] = arrangement[i], arrangement[i - 1]
    image = [0] * w.n
    for position, strand in enumerate(arrangement, start=1):
        image[strand - 1] = position
    return Permutation(tuple(image))


def tau_count(w: BraidWord) -> int:
    return sum(1 for letter in w.letters if letter.kind is LetterKind.SINGULAR)


def sigma_exponent_sum(w: BraidWord) -> int:
    total = 0
    for letter in w.letters:
        if letter.kind is LetterKind.REAL_POS:
            total += 1
        elif letter.kind is LetterKind.REAL_NEG:
            total -= 1
    return total


def closure_component_count(w: BraidWord) -> int:
    return len(permutation_image(w).cycles())
