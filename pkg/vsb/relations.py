"""
VSBraid - Relation Engine
==========================
The defining relations of VSB_n as bidirectional rewrite rules, one-step
neighbourhoods, and the bounded equivalence oracle.

Relation families, in presentation order:
  InvCancel(i, s)     s=+1: s_i S_i = 1     s=-1: S_i s_i = 1
  VirtInvol(i)        v_i v_i = 1
  R3(i, j)            s_i s_j s_i = s_j s_i s_j          |i-j| = 1
  V3(i, j)            v_i v_j v_i = v_j v_i v_j          |i-j| = 1
  VR3(i, j)           v_i s_j v_i = v_j s_i v_j          |i-j| = 1
  VS3(i, j)           v_i t_j v_i = v_j t_i v_j          |i-j| = 1
  RS3(i, j)           s_i s_j t_i = t_j s_i s_j          |i-j| = 1
  RS1(i)              s_i t_i = t_i s_i
  FarComm(i, j, g, h) g_i h_j = h_j g_i                  |i-j| > 1, g,h any LetterKind

Every rule preserves permutation_image, tau_count and sigma_exponent_sum, so
endpoints that disagree on any of them are rejected before searching.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Iterable, List, Optional, Sequence, Set, Tuple, Union

from vsb.errors import PreconditionError
from vsb.rewriting import (
    Direction,
    RewriteScript,
    RewriteStep,
    RuleIndex,
    apply_relation,
    register_family,
    relation_label,
)
from vsb.search import Equivalent, NotFoundWithinBudget, SearchBudget, bidirectional_search
from vsb.words import (
    BraidWord,
    GeneratorLetter,
    LetterKind,
    Letters,
    letters_key,
    permutation_image,
    sigma,
    sigma_exponent_sum,
    sigma_inv,
    tau,
    tau_count,
    virtual,
)

log = logging.getLogger(__name__)


class RelationFamily(str, Enum):
    INV_CANCEL = "InvCancel"
    VIRT_INVOL = "VirtInvol"
    R3 = "R3"
    V3 = "V3"
    VR3 = "VR3"
    VS3 = "VS3"
    RS3 = "RS3"
    RS1 = "RS1"
    FAR_COMM = "FarComm"


_ADJACENT = {RelationFamily.R3, RelationFamily.V3, RelationFamily.VR3, RelationFamily.VS3, RelationFamily.RS3}
_PARAM_COUNT = {
    RelationFamily.INV_CANCEL: 2,
    RelationFamily.VIRT_INVOL: 1,
    RelationFamily.RS1: 1,
    RelationFamily.FAR_COMM: 4,
}


@dataclass(frozen=True)
class RelationId:
    family: RelationFamily
    params: Tuple[int, ...]

    def __post_init__(self):
        family = RelationFamily(self.family)
        params = tuple(int(p) for p in self.params)
        object.__setattr__(self, "family", family)
        object.__setattr__(self, "params", params)
        expected = _PARAM_COUNT.get(family, 2)
        if len(params) != expected:
            raise PreconditionError(f"{family.value} takes {expected} parameters, got {len(params)}")
        indices = params[:2] if family in _ADJACENT or family is RelationFamily.FAR_COMM else params[:1]
        if min(indices) < 1:
            raise PreconditionError(f"{self}: strand indices start at 1")
        if family is RelationFamily.INV_CANCEL and params[1] not in (1, -1):
            raise PreconditionError(f"{self}: sign must be +1 or -1")
        if family in _ADJACENT and abs(params[0] - params[1]) != 1:
            raise PreconditionError(f"{self}: needs |i-j| = 1")
        if family is RelationFamily.FAR_COMM:
            if abs(params[0] - params[1]) <= 1:
                raise PreconditionError(f"{self}: needs |i-j| > 1")
            if not all(0 <= k <= 3 for k in params[2:]):
                raise PreconditionError(f"{self}: letter kinds are 0..3")

    def sides(self) -> Tuple[Letters, Letters]:
        return relation_sides(self)

    def max_index(self) -> int:
        if self.family in _ADJACENT or self.family is RelationFamily.FAR_COMM:
            return max(self.params[0], self.params[1])
        return self.params[0]

    def __str__(self) -> str:
        return relation_label(self)


def relation_sides(rel: RelationId) -> Tuple[Letters, Letters]:
    f, p = rel.family, rel.params
    if f is RelationFamily.INV_CANCEL:
        i, s = p
        pair = (sigma(i), sigma_inv(i)) if s == 1 else (sigma_inv(i), sigma(i))
        return pair, ()
    if f is RelationFamily.VIRT_INVOL:
        return (virtual(p[0]), virtual(p[0])), ()
    if f is RelationFamily.RS1:
        i = p[0]
        return (sigma(i), tau(i)), (tau(i), sigma(i))
    if f is RelationFamily.FAR_COMM:
        i, j, g, h = p
        left, right = GeneratorLetter(LetterKind(g), i), GeneratorLetter(LetterKind(h), j)
        return (left, right), (right, left)
    i, j = p
    if f is RelationFamily.R3:
        return (sigma(i), sigma(j), sigma(i)), (sigma(j), sigma(i), sigma(j))
    if f is RelationFamily.V3:
        return (virtual(i), virtual(j), virtual(i)), (virtual(j), virtual(i), virtual(j))
    if f is RelationFamily.VR3:
        return (virtual(i), sigma(j), virtual(i)), (virtual(j), sigma(i), virtual(j))
    if f is RelationFamily.VS3:
        return (virtual(i), tau(j), virtual(i)), (virtual(j), tau(i), virtual(j))
    # RS3
    return (sigma(i), sigma(j), tau(i)), (tau(j), sigma(i), sigma(j))


for _family in RelationFamily:
    register_family(_family.value, lambda params, _f=_family: RelationId(_f, params))


# ---------------------------------------------------------------------------
# Relation sets
# ---------------------------------------------------------------------------

def _adjacent_pairs(n: int) -> List[Tuple[int, int]]:
    return [(i, j) for i in range(1, n) for j in range(1, n) if abs(i - j) == 1]


def _far_pairs(n: int) -> List[Tuple[int, int]]:
    return [(i, j) for i in range(1, n) for j in range(1, n) if abs(i - j) > 1]


def relation_set(n: int) -> List[RelationId]:
    if n < 2:
        raise PreconditionError(f"relation_set needs n >= 2, got {n}")
    rels = []
    for i in range(1, n):
        rels.append(RelationId(RelationFamily.INV_CANCEL, (i, 1)))
        rels.append(RelationId(RelationFamily.INV_CANCEL, (i, -1)))
    rels += [RelationId(RelationFamily.VIRT_INVOL, (i,)) for i in range(1, n)]
    for family in (RelationFamily.R3, RelationFamily.V3, RelationFamily.VR3, RelationFamily.VS3, RelationFamily.RS3):
        rels += [RelationId(family, pair) for pair in _adjacent_pairs(n)]
    rels += [RelationId(RelationFamily.RS1, (i,)) for i in range(1, n)]
    for i, j in _far_pairs(n):
        for g in LetterKind:
            for h in LetterKind:
                rels.append(RelationId(RelationFamily.FAR_COMM, (i, j, int(g), int(h))))
    return rels


def virtual_relation_set(n: int) -> List[RelationId]:
    """VirtInvol, V3 and FarComm(v, v): a presentation of the symmetric group."""
    if n < 2:
        raise PreconditionError(f"virtual_relation_set needs n >= 2, got {n}")
    v = int(LetterKind.VIRTUAL)
    rels = [RelationId(RelationFamily.VIRT_INVOL, (i,)) for i in range(1, n)]
    rels += [RelationId(RelationFamily.V3, pair) for pair in _adjacent_pairs(n)]
    rels += [RelationId(RelationFamily.FAR_COMM, (i, j, v, v)) for i, j in _far_pairs(n)]
    return rels


@lru_cache(maxsize=32)
def _rule_index(rels: tuple) -> RuleIndex:
    return RuleIndex(rels)


def _fitting(rels: Iterable, n: int) -> tuple:
    return tuple(rel for rel in rels if rel.max_index() <= n - 1)


# ---------------------------------------------------------------------------
# Neighbourhoods and the oracle
# ---------------------------------------------------------------------------

def neighbors(w: BraidWord, rels: Sequence, max_word_length: Optional[int] = None) -> Set[BraidWord]:
    """One rewrite away, both directions, insertions up to max_word_length (default |w|+2)."""
    cap = len(w) + 2 if max_word_length is None else max_word_length
    index = _rule_index(_fitting(rels, w.n))
    return {BraidWord(w.n, letters) for _, letters in index.moves(w.letters, cap)}


def _invariants(w: BraidWord):
    return permutation_image(w), tau_count(w), sigma_exponent_sum(w)


def _length_stages(shortest: int, cap: int) -> List[int]:
    stages = list(range(min(shortest, cap), cap, 2))
    return stages + [cap]


def equivalent_bounded(
    a: BraidWord,
    b: BraidWord,
    rels: Sequence,
    budget: Optional[SearchBudget] = None,
) -> Union[Equivalent, NotFoundWithinBudget]:
    if a.n != b.n:
        raise PreconditionError(f"words live on {a.n} and {b.n} strands")
    if budget is None:
        budget = SearchBudget.for_words(a, b)
    if a == b:
        return Equivalent(RewriteScript(a.n, a, (), b))

    if _invariants(a) != _invariants(b):
        log.debug("[equiv] conservation laws differ for %s and %s", a, b)
        return NotFoundWithinBudget(0, proven_inequivalent=True, reason="invariants differ")

    index = _rule_index(_fitting(rels, a.n))
    start, head = index.cancel(a.letters)
    goal, tail = index.cancel(b.letters)

    def finish(middle: Sequence[RewriteStep]) -> Equivalent:
        back = [step.reversed() for step in reversed(tail)]
        return Equivalent(RewriteScript(a.n, a, tuple(head) + tuple(middle) + tuple(back), b))

    if start == goal:
        return finish(())

    explored = 0
    for cap in _length_stages(max(len(start), len(goal)), budget.max_word_length):
        outcome = bidirectional_search(
            start,
            goal,
            expand=lambda letters, _cap=cap: index.moves(letters, _cap),
            reverse=RewriteStep.reversed,
            key=letters_key,
            max_states=budget.max_states - explored,
            max_depth=budget.max_depth,
        )
        explored += outcome.states_explored
        if outcome.found:
            log.info("[equiv] connected at length cap %d after %d states", cap, explored)
            return finish(outcome.steps)
        if explored >= budget.max_states:
            break
    log.info("[equiv] no connection within budget (%d states)", explored)
    return NotFoundWithinBudget(explored)
