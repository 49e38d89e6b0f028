"""
VSBraid - Reduced Presentation
===============================
Generators s1, S1, t1, v1..v_{n-1} only. Every s_{i+1}^{+-1} and t_{i+1} is
conjugated down to index 1 by virtual crossings:

    g_{i+1} = (v_i ... v_1)(v_{i+1} ... v_2) g_1 (v_2 ... v_{i+1})(v_1 ... v_i)

Reduced relation families (a = s1, t = t1, digits are v_k):
  V3r(i, j)      v_i v_j v_i = v_j v_i v_j              |i-j| = 1
  VFarComm(i, j) v_i v_j = v_j v_i                      |i-j| > 1
  VInvol(i)      v_i v_i = 1
  Base20a(k)     k=0: a t = t a    k=1: a A = 1    k=2: A a = 1
  Base23(i, k)   g v_i = v_i g with g = a, A, t for k = 0, 1, 2     i >= 3
  BaseR3         a (1 2 a 2 1) a = (1 2 a 2 1) a (1 2 a 2 1)
  BaseRS3        t (1 2 a 2 1) a = (1 2 a 2 1) a (1 2 t 2 1)
  BaseRS3m       a (1 2 a 2 1) t = (1 2 t 2 1) a (1 2 a 2 1)      BaseRS3 with both words reversed
  BaseFarRR      a (2 3 1 2 a 2 1 3 2) = (2 3 1 2 a 2 1 3 2) a
  BaseFarRT      t (2 3 1 2 a 2 1 3 2) = (2 3 1 2 a 2 1 3 2) t
  BaseFarTT      t (2 3 1 2 t 2 1 3 2) = (2 3 1 2 t 2 1 3 2) t
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Dict, List, Optional, Tuple, Union

from vsb.errors import PreconditionError
from vsb.relations import equivalent_bounded
from vsb.rewriting import register_family, relation_label
from vsb.search import Equivalent, NotFoundWithinBudget, SearchBudget
from vsb.words import (
    BraidWord,
    GeneratorLetter,
    LetterKind,
    Letters,
    parse_letters,
    sigma,
    sigma_inv,
    tau,
    virtual,
)

log = logging.getLogger(__name__)


class ReducedFamily(str, Enum):
    V3R = "V3r"
    V_FAR_COMM = "VFarComm"
    V_INVOL = "VInvol"
    BASE_20A = "Base20a"
    BASE_23 = "Base23"
    BASE_R3 = "BaseR3"
    BASE_RS3 = "BaseRS3"
    BASE_RS3_MIRROR = "BaseRS3m"
    BASE_FAR_RR = "BaseFarRR"
    BASE_FAR_RT = "BaseFarRT"
    BASE_FAR_TT = "BaseFarTT"


_PARAM_COUNT = {
    ReducedFamily.V3R: 2,
    ReducedFamily.V_FAR_COMM: 2,
    ReducedFamily.V_INVOL: 1,
    ReducedFamily.BASE_20A: 1,
    ReducedFamily.BASE_23: 2,
}

_BASE_WORDS: Dict[ReducedFamily, Tuple[str, str]] = {
    ReducedFamily.BASE_R3: ("s1 v1 v2 s1 v2 v1 s1", "v1 v2 s1 v2 v1 s1 v1 v2 s1 v2 v1"),
    ReducedFamily.BASE_RS3: ("t1 v1 v2 s1 v2 v1 s1", "v1 v2 s1 v2 v1 s1 v1 v2 t1 v2 v1"),
    ReducedFamily.BASE_RS3_MIRROR: ("s1 v1 v2 s1 v2 v1 t1", "v1 v2 t1 v2 v1 s1 v1 v2 s1 v2 v1"),
    ReducedFamily.BASE_FAR_RR: ("s1 v2 v3 v1 v2 s1 v2 v1 v3 v2", "v2 v3 v1 v2 s1 v2 v1 v3 v2 s1"),
    ReducedFamily.BASE_FAR_RT: ("t1 v2 v3 v1 v2 s1 v2 v1 v3 v2", "v2 v3 v1 v2 s1 v2 v1 v3 v2 t1"),
    ReducedFamily.BASE_FAR_TT: ("t1 v2 v3 v1 v2 t1 v2 v1 v3 v2", "v2 v3 v1 v2 t1 v2 v1 v3 v2 t1"),
}
_BASE_SIDES = {family: (parse_letters(lhs), parse_letters(rhs)) for family, (lhs, rhs) in _BASE_WORDS.items()}

# Base23 kind code -> generator at index 1
_BASE23_KINDS = (LetterKind.REAL_POS, LetterKind.REAL_NEG, LetterKind.SINGULAR)


@dataclass(frozen=True)
class ReducedRelationId:
    family: ReducedFamily
    params: Tuple[int, ...] = ()

    def __post_init__(self):
        family = ReducedFamily(self.family)
        params = tuple(int(p) for p in self.params)
        object.__setattr__(self, "family", family)
        object.__setattr__(self, "params", params)
        expected = _PARAM_COUNT.get(family, 0)
        if len(params) != expected:
            raise PreconditionError(f"{family.value} takes {expected} parameters, got {len(params)}")
        if family is ReducedFamily.V3R and (min(params) < 1 or abs(params[0] - params[1]) != 1):
            raise PreconditionError(f"{self}: needs |i-j| = 1")
        if family is ReducedFamily.V_FAR_COMM and (min(params) < 1 or abs(params[0] - params[1]) <= 1):
            raise PreconditionError(f"{self}: needs |i-j| > 1")
        if family is ReducedFamily.V_INVOL and params[0] < 1:
            raise PreconditionError(f"{self}: strand indices start at 1")
        if family is ReducedFamily.BASE_20A and params[0] not in (0, 1, 2):
            raise PreconditionError(f"{self}: variant is 0, 1 or 2")
        if family is ReducedFamily.BASE_23 and (params[0] < 3 or params[1] not in (0, 1, 2)):
            raise PreconditionError(f"{self}: needs i >= 3 and kind 0, 1 or 2")

    def sides(self) -> Tuple[Letters, Letters]:
        f, p = self.family, self.params
        if f is ReducedFamily.V3R:
            i, j = p
            return (virtual(i), virtual(j), virtual(i)), (virtual(j), virtual(i), virtual(j))
        if f is ReducedFamily.V_FAR_COMM:
            i, j = p
            return (virtual(i), virtual(j)), (virtual(j), virtual(i))
        if f is ReducedFamily.V_INVOL:
            return (virtual(p[0]), virtual(p[0])), ()
        if f is ReducedFamily.BASE_20A:
            if p[0] == 0:
                return (sigma(1), tau(1)), (tau(1), sigma(1))
            if p[0] == 1:
                return (sigma(1), sigma_inv(1)), ()
            return (sigma_inv(1), sigma(1)), ()
        if f is ReducedFamily.BASE_23:
            g = GeneratorLetter(_BASE23_KINDS[p[1]], 1)
            return (g, virtual(p[0])), (virtual(p[0]), g)
        return _BASE_SIDES[f]

    def max_index(self) -> int:
        f = self.family
        if f in (ReducedFamily.V3R, ReducedFamily.V_FAR_COMM):
            return max(self.params)
        if f in (ReducedFamily.V_INVOL, ReducedFamily.BASE_23):
            return self.params[0]
        if f is ReducedFamily.BASE_20A:
            return 1
        if f in (ReducedFamily.BASE_R3, ReducedFamily.BASE_RS3, ReducedFamily.BASE_RS3_MIRROR):
            return 2
        return 3

    def __str__(self) -> str:
        return relation_label(self)


for _family in ReducedFamily:
    register_family(_family.value, lambda params, _f=_family: ReducedRelationId(_f, params))


# ---------------------------------------------------------------------------
# Relation sets
# ---------------------------------------------------------------------------

def virtual_reduced_relation_set(n: int) -> List[ReducedRelationId]:
    if n < 2:
        raise PreconditionError(f"reduced relation sets need n >= 2, got {n}")
    idx = range(1, n)
    rels = [ReducedRelationId(ReducedFamily.V3R, (i, j)) for i in idx for j in idx if abs(i - j) == 1]
    rels += [ReducedRelationId(ReducedFamily.V_FAR_COMM, (i, j)) for i in idx for j in idx if abs(i - j) > 1]
    rels += [ReducedRelationId(ReducedFamily.V_INVOL, (i,)) for i in idx]
    return rels


def reduced_relation_set(n: int) -> List[ReducedRelationId]:
    rels = virtual_reduced_relation_set(n)
    rels += [ReducedRelationId(ReducedFamily.BASE_20A, (k,)) for k in (0, 1, 2)]
    for i in range(3, n):
        rels += [ReducedRelationId(ReducedFamily.BASE_23, (i, k)) for k in (2, 0, 1)]
    if n >= 3:
        rels.append(ReducedRelationId(ReducedFamily.BASE_R3))
        rels.append(ReducedRelationId(ReducedFamily.BASE_RS3))
        rels.append(ReducedRelationId(ReducedFamily.BASE_RS3_MIRROR))
    if n >= 4:
        rels += [
            ReducedRelationId(ReducedFamily.BASE_FAR_RR),
            ReducedRelationId(ReducedFamily.BASE_FAR_RT),
            ReducedRelationId(ReducedFamily.BASE_FAR_TT),
        ]
    return rels


# ---------------------------------------------------------------------------
# Expansion
# ---------------------------------------------------------------------------

def conjugator(i: int) -> Letters:
    """(v_i ... v_1)(v_{i+1} ... v_2): carries index 1 up to index i+1."""
    return tuple(virtual(k) for k in range(i, 0, -1)) + tuple(virtual(k) for k in range(i + 1, 1, -1))


def expand_letter(letter: GeneratorLetter) -> Letters:
    if letter.kind is LetterKind.VIRTUAL or letter.index == 1:
        return (letter,)
    head = conjugator(letter.index - 1)
    return head + (GeneratorLetter(letter.kind, 1),) + tuple(reversed(head))


def expand_to_reduced(w: BraidWord) -> BraidWord:
    out: List[GeneratorLetter] = []
    for letter in w.letters:
        out.extend(expand_letter(letter))
    return BraidWord(w.n, tuple(out))


def is_reduced(w: BraidWord) -> bool:
    return all(letter.kind is LetterKind.VIRTUAL or letter.index == 1 for letter in w.letters)


# ---------------------------------------------------------------------------
# Shift identity
# ---------------------------------------------------------------------------

def _arch(start: int, turn: int) -> Letters:
    step = 1 if turn > start else -1
    climb = list(range(start, turn, step))
    return tuple(virtual(k) for k in climb + [turn] + climb[::-1])


def shift_identity_sides(i: int, j: int, n: int) -> Tuple[BraidWord, BraidWord]:
    """v_i ... v_j ... v_i on the left, v_j ... v_i ... v_j on the right."""
    if abs(i - j) < 2:
        raise PreconditionError(f"shift identity needs |i-j| >= 2, got i={i}, j={j}")
    if min(i, j) < 1 or max(i, j) > n - 1:
        raise PreconditionError(f"indices {i}, {j} must lie in 1..{n - 1}")
    return BraidWord(n, _arch(i, j)), BraidWord(n, _arch(j, i))


def verify_shift_identity(
    i: int,
    j: int,
    n: int,
    budget: Optional[SearchBudget] = None,
) -> Union[Equivalent, NotFoundWithinBudget]:
    lhs, rhs = shift_identity_sides(i, j, n)
    result = equivalent_bounded(lhs, rhs, virtual_reduced_relation_set(n), budget)
    log.debug("[reduced] shift identity (%d,%d) on %d strands: found=%s", i, j, n, result.found)
    return result
