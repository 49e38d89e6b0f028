"""
VSBraid - Morse Diagrams
=========================
Oriented virtual singular link diagrams written as one event per row, read top
to bottom: cups open two strands, caps join two, crossings swap two neighbours.

Events (JSON):
  {"kind": "cup", "pos": 1, "orient": "ccw"}     new strands at pos, pos+1
  {"kind": "cap", "pos": 1}                      joins pos and pos+1
  {"kind": "x+" | "x-" | "xs" | "xv", "pos": 1}  crossing of pos and pos+1

A ccw cup sends its component down the left strand and back up the right one;
a cw cup the other way round. x+ is the crossing where, with both strands
running down, the strand from the upper left passes over.

Between row g-1 and row g sits gap g; a point on the diagram is (gap, strand
position). Tracing walks these points, turning at cups and caps, and records
every passage through a crossing.

Braiding: a diagram shaped like a closure (cups, then crossings of two
downward strands, then caps) is read row by row on its down strands. Any other
diagram puts each crossing on a private pair of columns with both strands
running down, and one trailing virtual permutation rejoins the arcs between
consecutive passages.
"""

import json
import logging
from dataclasses import asdict, dataclass
from enum import Enum
from pathlib import Path
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple, Union

from vsb.errors import DiagramError
from vsb.verdicts import Invalid, Valid
from vsb.words import BraidWord, GeneratorLetter, LetterKind, read_json, sigma, sigma_inv, tau, virtual

log = logging.getLogger(__name__)


class EventKind(str, Enum):
    CUP = "cup"
    CAP = "cap"
    REAL_POS = "x+"
    REAL_NEG = "x-"
    SINGULAR = "xs"
    VIRTUAL = "xv"

    @property
    def is_crossing(self) -> bool:
        return self not in (EventKind.CUP, EventKind.CAP)


class CupOrientation(str, Enum):
    CCW = "ccw"
    CW = "cw"


LETTER_EVENT: Dict[LetterKind, EventKind] = {
    LetterKind.REAL_POS: EventKind.REAL_POS,
    LetterKind.REAL_NEG: EventKind.REAL_NEG,
    LetterKind.SINGULAR: EventKind.SINGULAR,
    LetterKind.VIRTUAL: EventKind.VIRTUAL,
}


@dataclass(frozen=True)
class MorseEvent:
    kind: EventKind
    pos: int
    orient: Optional[CupOrientation] = None

    def __post_init__(self):
        object.__setattr__(self, "kind", EventKind(self.kind))
        if self.orient is not None:
            object.__setattr__(self, "orient", CupOrientation(self.orient))

    @classmethod
    def cup(cls, pos: int, orient: CupOrientation = CupOrientation.CCW) -> "MorseEvent":
        return cls(EventKind.CUP, pos, orient)

    @classmethod
    def cap(cls, pos: int) -> "MorseEvent":
        return cls(EventKind.CAP, pos)

    def to_json(self) -> dict:
        data = {"kind": self.kind.value, "pos": self.pos}
        if self.kind is EventKind.CUP:
            data["orient"] = (self.orient or CupOrientation.CCW).value
        return data

    def __str__(self) -> str:
        suffix = f" {self.orient.value}" if self.orient else ""
        return f"{self.kind.value} {self.pos}{suffix}"


@dataclass(frozen=True)
class MorseDiagram:
    events: Tuple[MorseEvent, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "events", tuple(self.events))

    def __len__(self) -> int:
        return len(self.events)

    def crossing_rows(self) -> List[int]:
        return [row for row, event in enumerate(self.events) if event.kind.is_crossing]


@dataclass(frozen=True)
class DiagramInvariants:
    component_count: int
    real_pos: int
    real_neg: int
    singular: int
    virtual_count: int

    def to_json(self) -> dict:
        return asdict(self)

    def without_virtual(self) -> Tuple[int, int, int, int]:
        return (self.component_count, self.real_pos, self.real_neg, self.singular)


# ---------------------------------------------------------------------------
# JSON
# ---------------------------------------------------------------------------

def diagram_from_json(data) -> MorseDiagram:
    if not isinstance(data, dict) or not isinstance(data.get("events"), list):
        raise DiagramError('diagram JSON needs an "events" list')
    events = []
    for row, item in enumerate(data["events"]):
        try:
            kind = EventKind(item["kind"])
            pos = item["pos"]
            if not isinstance(pos, int) or isinstance(pos, bool):
                raise TypeError("pos must be an integer")
            orient = item.get("orient")
            if kind is EventKind.CUP:
                orient = CupOrientation(orient or "ccw")
            elif orient is not None:
                raise ValueError("only cups carry an orientation")
        except (KeyError, TypeError, ValueError, AttributeError) as e:
            raise DiagramError(f"event {row}: {e}") from e
        events.append(MorseEvent(kind, pos, orient))
    return MorseDiagram(tuple(events))


def diagram_to_json(d: MorseDiagram) -> dict:
    return {"events": [event.to_json() for event in d.events]}


def load_diagram(path: Union[str, Path]) -> MorseDiagram:
    return diagram_from_json(read_json(path, DiagramError))


def save_diagram(d: MorseDiagram, path: Union[str, Path]) -> None:
    Path(path).write_text(json.dumps(diagram_to_json(d), indent=2) + "\n", encoding="utf-8")


# ---------------------------------------------------------------------------
# Tracing
# ---------------------------------------------------------------------------

class Passage(NamedTuple):
    """One strand going through one crossing.

    strand 1 joins the top-left and bottom-right ends, strand 2 the top-right
    and bottom-left ends.
    """

    row: int
    strand: int
    down: bool


Component = Tuple[Passage, ...]


def _structure(events: Sequence[MorseEvent]) -> Optional[Invalid]:
    if not events:
        return Invalid(0, "empty diagram")
    live = 0
    for row, event in enumerate(events):
        q = event.pos
        if q < 1:
            return Invalid(row, f"position {q} out of range")
        if event.kind is EventKind.CUP:
            if event.orient is None:
                return Invalid(row, "cup without orientation")
            if q > live + 1:
                return Invalid(row, f"cup position {q} out of range for {live} live strands")
            live += 2
        elif event.kind is EventKind.CAP:
            if live == 0:
                return Invalid(row, "cap with no live strands")
            if q + 1 > live:
                return Invalid(row, f"cap position {q} out of range for {live} live strands")
            live -= 2
        else:
            if q + 1 > live:
                return Invalid(row, f"crossing position {q} out of range for {live} live strands")
    if live != 0:
        return Invalid(len(events), "diagram not closed")
    return None


class _Move(NamedTuple):
    gap: int
    p: int
    down: bool
    passage: Optional[Passage] = None
    turned_at: Optional[int] = None  # cup row where an upward strand turned down


def _step(events: Sequence[MorseEvent], gap: int, p: int, down: bool) -> _Move:
    if down:
        row = gap
        event = events[row]
        q = event.pos
        if event.kind is EventKind.CUP:
            return _Move(gap + 1, p if p < q else p + 2, True)
        if event.kind is EventKind.CAP:
            if p == q:
                return _Move(gap, q + 1, False)
            if p == q + 1:
                return _Move(gap, q, False)
            return _Move(gap + 1, p if p < q else p - 2, True)
        if p == q:
            return _Move(gap + 1, q + 1, True, Passage(row, 1, True))
        if p == q + 1:
            return _Move(gap + 1, q, True, Passage(row, 2, True))
        return _Move(gap + 1, p, True)

    row = gap - 1
    event = events[row]
    q = event.pos
    if event.kind is EventKind.CUP:
        if p == q + 1:
            return _Move(gap, q, True, turned_at=row)
        if p == q:
            return _Move(gap, q + 1, True, turned_at=row)
        return _Move(gap - 1, p if p < q else p - 2, False)
    if event.kind is EventKind.CAP:
        return _Move(gap - 1, p if p < q else p + 2, False)
    if p == q + 1:
        return _Move(gap - 1, q, False, Passage(row, 1, False))
    if p == q:
        return _Move(gap - 1, q + 1, False, Passage(row, 2, False))
    return _Move(gap - 1, p, False)


def _step_limit(events: Sequence[MorseEvent]) -> int:
    return 4 * len(events) * (len(events) + 1) + 4


def _trace(events: Sequence[MorseEvent]) -> Union[List[Component], Invalid]:
    components: List[Component] = []
    seen_cups = set()

    for start_row, start_event in enumerate(events):
        if start_event.kind is not EventKind.CUP or start_row in seen_cups:
            continue
        seen_cups.add(start_row)
        q0 = start_event.pos
        start = (start_row + 1, q0 if start_event.orient is CupOrientation.CCW else q0 + 1, True)
        gap, p, down = start
        passages: List[Passage] = []
        for _ in range(_step_limit(events)):
            move = _step(events, gap, p, down)
            if move.turned_at is not None:
                cup = events[move.turned_at]
                arrived = CupOrientation.CCW if move.p == cup.pos else CupOrientation.CW
                if arrived is not cup.orient:
                    return Invalid(move.turned_at, "cup orientation inconsistent with its component")
                seen_cups.add(move.turned_at)
            if move.passage is not None:
                passages.append(move.passage)
            gap, p, down = move.gap, move.p, move.down
            if (gap, p, down) == start:
                break
        else:
            raise DiagramError(f"tracing from the cup at row {start_row} did not close up")
        components.append(tuple(passages))
    return components


def validate(d: MorseDiagram) -> Union[Valid, Invalid]:
    problem = _structure(d.events)
    if problem is not None:
        return problem
    traced = _trace(d.events)
    if isinstance(traced, Invalid):
        return traced
    return Valid()


def trace_components(d: MorseDiagram) -> List[Component]:
    problem = _structure(d.events)
    if problem is not None:
        raise DiagramError(str(problem))
    traced = _trace(d.events)
    if isinstance(traced, Invalid):
        raise DiagramError(str(traced))
    return traced


def _directions(components: Sequence[Component]) -> Dict[int, Dict[int, bool]]:
    """row -> {strand: runs down}"""
    found: Dict[int, Dict[int, bool]] = {}
    for component in components:
        for passage in component:
            found.setdefault(passage.row, {})[passage.strand] = passage.down
    return found


def _oriented_positive(kind: EventKind, directions: Dict[int, bool]) -> bool:
    same = directions[1] == directions[2]
    return same if kind is EventKind.REAL_POS else not same


def invariants(d: MorseDiagram) -> DiagramInvariants:
    components = trace_components(d)
    directions = _directions(components)
    real_pos = real_neg = singular = virtual_count = 0
    for row in d.crossing_rows():
        kind = d.events[row].kind
        if kind is EventKind.SINGULAR:
            singular += 1
        elif kind is EventKind.VIRTUAL:
            virtual_count += 1
        elif _oriented_positive(kind, directions[row]):
            real_pos += 1
        else:
            real_neg += 1
    return DiagramInvariants(len(components), real_pos, real_neg, singular, virtual_count)


# ---------------------------------------------------------------------------
# Closure and braiding
# ---------------------------------------------------------------------------

def close(w: BraidWord) -> MorseDiagram:
    """Nested ccw cups, the braid on the left n columns, nested caps; return arcs run on the right."""
    events = [MorseEvent.cup(i) for i in range(1, w.n + 1)]
    events += [MorseEvent(LETTER_EVENT[letter.kind], letter.index) for letter in w.letters]
    events += [MorseEvent.cap(i) for i in range(w.n, 0, -1)]
    return MorseDiagram(tuple(events))


def _crossing_letter(kind: EventKind, column: int, left: int) -> GeneratorLetter:
    if kind is EventKind.SINGULAR:
        return tau(column)
    if kind is EventKind.VIRTUAL:
        return virtual(column)
    over = 1 if kind is EventKind.REAL_POS else 2
    return sigma(column) if left == over else sigma_inv(column)


def _sorting_word(targets: List[int]) -> List[GeneratorLetter]:
    """Adjacent transpositions carrying the strand at column k+1 to targets[k]."""
    arr = list(targets)
    out = []
    for end in range(len(arr) - 1, 0, -1):
        for p in range(end):
            if arr[p] > arr[p + 1]:
                arr[p], arr[p + 1] = arr[p + 1], arr[p]
                out.append(virtual(p + 1))
    return out


def _band_word(d: MorseDiagram) -> Optional[BraidWord]:
    """The word read straight off a diagram shaped like a closure, else None.

    Shape: cups only, then crossings whose strands both run down, then caps
    only. Down strands keep their rank as braid strands; where the closing
    arcs do not return each bottom end to the top end of the same rank, a
    trailing virtual permutation rejoins them.
    """
    events = d.events
    top = next(row for row, event in enumerate(events) if event.kind is not EventKind.CUP)
    bottom = top
    while bottom < len(events) and events[bottom].kind.is_crossing:
        bottom += 1
    if any(event.kind is not EventKind.CAP for event in events[bottom:]):
        return None

    down: List[bool] = []
    for event in events[:top]:
        q = event.pos
        down[q - 1:q - 1] = [event.orient is CupOrientation.CCW, event.orient is not CupOrientation.CCW]

    letters: List[GeneratorLetter] = []
    for event in events[top:bottom]:
        q = event.pos
        if not (down[q - 1] and down[q]):
            return None
        letters.append(_crossing_letter(event.kind, sum(down[:q - 1]) + 1, 1))

    columns = [p for p, runs_down in enumerate(down, start=1) if runs_down]
    rank = {p: k for k, p in enumerate(columns, start=1)}
    targets = []
    for p in columns:
        gap, q, going_down = bottom, p, True
        for _ in range(_step_limit(events)):
            gap, q, going_down = _step(events, gap, q, going_down)[:3]
            if going_down and gap == top:
                break
        else:
            raise DiagramError(f"the strand leaving column {p} at row {bottom} never returns to the top")
        targets.append(rank[q])

    return BraidWord(len(columns), tuple(letters + _sorting_word(targets)))


def braid(d: MorseDiagram) -> BraidWord:
    components = trace_components(d)
    banded = _band_word(d)
    if banded is not None:
        log.debug("[braid] closure shape, read on %d strands", banded.n)
        return banded

    directions = _directions(components)
    rows = d.crossing_rows()
    column_of = {row: 2 * j + 1 for j, row in enumerate(rows)}

    left_strand: Dict[int, int] = {}
    letters: List[GeneratorLetter] = []
    for row in rows:
        left = 1 if directions[row][1] == directions[row][2] else 2
        left_strand[row] = left
        letters.append(_crossing_letter(d.events[row].kind, column_of[row], left))

    def entry(passage: Passage) -> int:
        base = column_of[passage.row]
        return base if passage.strand == left_strand[passage.row] else base + 1

    def exit_(passage: Passage) -> int:
        base = column_of[passage.row]
        return base + 1 if passage.strand == left_strand[passage.row] else base

    free = sum(1 for component in components if not component)
    width = 2 * len(rows) + free
    targets = [0] * width
    next_free = 2 * len(rows) + 1
    for component in components:
        if not component:
            targets[next_free - 1] = next_free
            next_free += 1
            continue
        for k, passage in enumerate(component):
            following = component[(k + 1) % len(component)]
            targets[exit_(passage) - 1] = entry(following)

    letters += _sorting_word(targets)
    log.debug("[braid] %d crossings, %d free components -> %d strands", len(rows), free, width)
    return BraidWord(width, tuple(letters))
