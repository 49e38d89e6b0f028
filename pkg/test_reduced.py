"""
VSBraid - Reduced Presentation Tests
=====================================
Closed-form expansion, the reduced relation set and the shift identity.
"""

import numpy as np
import pytest

from vsb.errors import PreconditionError
from vsb.reduced import (
    ReducedFamily,
    ReducedRelationId,
    expand_to_reduced,
    is_reduced,
    reduced_relation_set,
    shift_identity_sides,
    verify_shift_identity,
    virtual_reduced_relation_set,
)
from vsb.rewriting import check_rewrite_script, parse_relation
from vsb.words import (
    BraidWord,
    format_word,
    parse_word,
    permutation_image,
    sigma_exponent_sum,
    tau_count,
)


# ── Expansion ────────────────────────────────────────────────────────────

@pytest.mark.parametrize(
    "text, n, expected",
    [
        ("s2", 3, "v1 v2 s1 v2 v1"),
        ("t2", 3, "v1 v2 t1 v2 v1"),
        ("S2", 3, "v1 v2 S1 v2 v1"),
        ("s3", 4, "v2 v1 v3 v2 s1 v2 v3 v1 v2"),
        ("t3", 4, "v2 v1 v3 v2 t1 v2 v3 v1 v2"),
        ("s1", 2, "s1"),
        ("v3", 4, "v3"),
    ],
)
def test_expansion_closed_forms(text, n, expected):
    assert format_word(expand_to_reduced(parse_word(text, n))) == expected


def test_expansion_keeps_invariants_and_is_idempotent():
    w = parse_word("s3 t2 v1 S2 t1 v3", 4)
    r = expand_to_reduced(w)
    assert is_reduced(r)
    assert not is_reduced(w)
    assert expand_to_reduced(r) == r
    assert permutation_image(r) == permutation_image(w)
    assert tau_count(r) == tau_count(w)
    assert sigma_exponent_sum(r) == sigma_exponent_sum(w)


# ── Relation set ─────────────────────────────────────────────────────────

def test_three_strands_have_base_r3_and_no_base23():
    rels = reduced_relation_set(3)
    base_r3 = ReducedRelationId(ReducedFamily.BASE_R3)
    assert base_r3 in rels
    lhs, rhs = base_r3.sides()
    assert format_word(BraidWord(3, lhs)) == "s1 v1 v2 s1 v2 v1 s1"
    assert format_word(BraidWord(3, rhs)) == "v1 v2 s1 v2 v1 s1 v1 v2 s1 v2 v1"
    assert not any(rel.family is ReducedFamily.BASE_23 for rel in rels)
    assert not any(rel.family is ReducedFamily.BASE_FAR_TT for rel in rels)


def test_four_strands_add_far_base_relations():
    rels = reduced_relation_set(4)
    assert ReducedRelationId(ReducedFamily.BASE_FAR_TT) in rels
    assert ReducedRelationId(ReducedFamily.BASE_23, (3, 2)) in rels
    assert ReducedRelationId(ReducedFamily.BASE_FAR_TT).max_index() == 3


def test_reduced_relations_only_use_the_reduced_alphabet():
    for rel in reduced_relation_set(5):
        for side in rel.sides():
            assert is_reduced(BraidWord(5, side)), rel


def test_reduced_relations_keep_the_conservation_laws():
    for rel in reduced_relation_set(5):
        lhs, rhs = (BraidWord(5, side) for side in rel.sides())
        assert permutation_image(lhs) == permutation_image(rhs), rel
        assert tau_count(lhs) == tau_count(rhs), rel
        assert sigma_exponent_sum(lhs) == sigma_exponent_sum(rhs), rel


def test_reduced_labels_parse_back():
    for rel in reduced_relation_set(4):
        assert parse_relation(str(rel)) == rel
    assert str(ReducedRelationId(ReducedFamily.BASE_R3)) == "BaseR3()"


def test_virtual_reduced_set():
    rels = virtual_reduced_relation_set(4)
    assert {rel.family for rel in rels} == {ReducedFamily.V3R, ReducedFamily.V_FAR_COMM, ReducedFamily.V_INVOL}


@pytest.mark.parametrize(
    "family, params",
    [
        (ReducedFamily.BASE_23, (2, 0)),
        (ReducedFamily.BASE_20A, (3,)),
        (ReducedFamily.V3R, (1, 3)),
        (ReducedFamily.BASE_R3, (1,)),
    ],
)
def test_reduced_relation_id_validates(family, params):
    with pytest.raises(PreconditionError):
        ReducedRelationId(family, params)


def test_reduced_set_needs_two_strands():
    with pytest.raises(PreconditionError):
        reduced_relation_set(1)


# ── Mirrored base relation ───────────────────────────────────────────────

# unreduced Burau at t = -1 on three strands; t1 goes to a rank-one idempotent
_BURAU_MODEL = {
    "s1": [[2, -1, 0], [1, 0, 0], [0, 0, 1]],
    "S1": [[0, 1, 0], [-1, 2, 0], [0, 0, 1]],
    "t1": [[0, 0, 1], [0, 0, 1], [0, 0, 1]],
    "v1": [[0, 1, 0], [1, 0, 0], [0, 0, 1]],
    "v2": [[1, 0, 0], [0, 0, 1], [0, 1, 0]],
}


def _model_matrix(letters):
    out = np.eye(3, dtype=np.int64)
    for letter in letters:
        out = out @ np.array(_BURAU_MODEL[letter.token], dtype=np.int64)
    return out


def test_mirrored_base_relation_is_rs3_one_two():
    lhs, rhs = (expand_to_reduced(parse_word(text, 3)) for text in ("s1 s2 t1", "t2 s1 s2"))
    assert (lhs.letters, rhs.letters) == ReducedRelationId(ReducedFamily.BASE_RS3_MIRROR).sides()
    assert ReducedRelationId(ReducedFamily.BASE_RS3_MIRROR) in reduced_relation_set(3)


def test_no_other_reduced_relation_implies_the_mirrored_one():
    mirror = ReducedRelationId(ReducedFamily.BASE_RS3_MIRROR)
    for rel in reduced_relation_set(3):
        lhs, rhs = rel.sides()
        assert np.array_equal(_model_matrix(lhs), _model_matrix(rhs)) == (rel != mirror), str(rel)


# ── Shift identity ───────────────────────────────────────────────────────

def test_shift_identity_sides():
    lhs, rhs = shift_identity_sides(3, 1, 4)
    assert format_word(lhs) == "v3 v2 v1 v2 v3"
    assert format_word(rhs) == "v1 v2 v3 v2 v1"


@pytest.mark.parametrize(
    "i, j, n",
    [(3, 1, 4), (1, 3, 4)] + [(i, j, 5) for i in range(1, 5) for j in range(1, 5) if abs(i - j) >= 2],
)
def test_shift_identity_holds(i, j, n):
    result = verify_shift_identity(i, j, n)
    assert result.found
    assert check_rewrite_script(result.witness, virtual_reduced_relation_set(n)).ok


@pytest.mark.parametrize("i, j, n", [(2, 1, 4), (1, 4, 4), (0, 2, 4)])
def test_shift_identity_preconditions(i, j, n):
    with pytest.raises(PreconditionError):
        verify_shift_identity(i, j, n)
