"""
VSBraid - Bounded Search
=========================
Bidirectional breadth-first search over an implicit graph, shared by the
relation engine (words of fixed strand count) and the Markov calculus (words
whose strand count changes).

The caller supplies:
  expand(state)  -> iterable of (step, next_state)
  reverse(step)  -> the step that undoes it
  key(state)     -> sort key; every frontier layer is processed in key order

Searches stop at the first meeting point, so results depend only on the
inputs and the budget.
"""

import logging
from dataclasses import dataclass, field, replace
from typing import Any, Callable, Dict, Hashable, Iterable, List, Optional, Tuple

from vsb import config
from vsb.errors import PreconditionError

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class SearchBudget:
    max_word_length: int
    max_states: int = config.DEFAULT_MAX_STATES
    max_depth: int = config.DEFAULT_MAX_DEPTH
    max_strands: Optional[int] = None

    def __post_init__(self):
        for name in ("max_word_length", "max_states", "max_depth"):
            if getattr(self, name) < 1:
                raise PreconditionError(f"budget {name} must be positive, got {getattr(self, name)}")
        if self.max_strands is not None and self.max_strands < 1:
            raise PreconditionError(f"budget max_strands must be positive, got {self.max_strands}")

    @classmethod
    def for_words(cls, *words, **overrides) -> "SearchBudget":
        """Defaults sized to the endpoints; overrides set to None are ignored."""
        budget = cls(
            max_word_length=max(len(w) for w in words) + config.EXTRA_LENGTH,
            max_strands=max(w.n for w in words) + config.EXTRA_STRANDS,
        )
        chosen = {k: v for k, v in overrides.items() if v is not None}
        return replace(budget, **chosen) if chosen else budget


@dataclass(frozen=True)
class Equivalent:
    witness: Any

    @property
    def found(self) -> bool:
        return True


@dataclass(frozen=True)
class NotFoundWithinBudget:
    """Unknown, unless proven_inequivalent is set by a conservation law."""

    states_explored: int
    proven_inequivalent: bool = False
    reason: str = ""

    @property
    def found(self) -> bool:
        return False


@dataclass
class SearchOutcome:
    found: bool
    steps: List[Any] = field(default_factory=list)
    states_explored: int = 0
    exhausted: bool = False


def _walk_back(parents: Dict[Hashable, Optional[Tuple[Hashable, Any]]], state) -> List[Any]:
    steps = []
    while parents[state] is not None:
        state, step = parents[state]
        steps.append(step)
    return steps


def bidirectional_search(
    start: Hashable,
    goal: Hashable,
    expand: Callable[[Any], Iterable[Tuple[Any, Hashable]]],
    reverse: Callable[[Any], Any],
    key: Callable[[Any], Any],
    max_states: int,
    max_depth: int,
) -> SearchOutcome:
    if start == goal:
        return SearchOutcome(found=True, states_explored=1)

    # forward[s] = (previous state, step previous -> s)
    forward: Dict[Hashable, Optional[Tuple[Hashable, Any]]] = {start: None}
    # backward[s] = (next state toward goal, step s -> next)
    backward: Dict[Hashable, Optional[Tuple[Hashable, Any]]] = {goal: None}
    front_f, front_b = [start], [goal]
    depth_f = depth_b = 0

    def joined(meeting) -> List[Any]:
        head = list(reversed(_walk_back(forward, meeting)))
        tail = []
        state = meeting
        while backward[state] is not None:
            state, step = backward[state]
            tail.append(step)
        return head + tail

    while front_f and front_b and depth_f + depth_b < max_depth:
        grow_forward = len(front_f) <= len(front_b)
        frontier = front_f if grow_forward else front_b
        mine, other = (forward, backward) if grow_forward else (backward, forward)
        layer = []
        for state in sorted(frontier, key=key):
            for step, nxt in expand(state):
                if nxt in mine:
                    continue
                mine[nxt] = (state, step) if grow_forward else (state, reverse(step))
                if nxt in other:
                    explored = len(forward) + len(backward)
                    log.debug("[search] met after %d states", explored)
                    return SearchOutcome(found=True, steps=joined(nxt), states_explored=explored)
                layer.append(nxt)
                if len(forward) + len(backward) >= max_states:
                    return SearchOutcome(found=False, states_explored=len(forward) + len(backward))
        if grow_forward:
            front_f, depth_f = layer, depth_f + 1
        else:
            front_b, depth_b = layer, depth_b + 1

    explored = len(forward) + len(backward)
    exhausted = not front_f or not front_b
    log.debug("[search] gave up: %d states, depths %d+%d, exhausted=%s", explored, depth_f, depth_b, exhausted)
    return SearchOutcome(found=False, states_explored=explored, exhausted=exhausted)
