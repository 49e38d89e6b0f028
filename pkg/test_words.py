"""
VSBraid - Word Core Tests
==========================
Parsing, monoid operations and the three conservation laws.
"""

import json

import pytest

from vsb.errors import PreconditionError, WordParseError
from vsb.words import (
    BraidWord,
    Permutation,
    closure_component_count,
    compose,
    format_word,
    free_reduce,
    invert,
    load_word,
    parse_word,
    permutation_image,
    sigma,
    sigma_exponent_sum,
    sigma_inv,
    tau,
    tau_count,
    virtual,
    word_from_json,
    word_to_json,
)


# ── Parsing ──────────────────────────────────────────────────────────────

def test_parse_maps_every_token_kind():
    w = parse_word("s1 S2 t1 v3", 4)
    assert w.n == 4
    assert w.letters == (sigma(1), sigma_inv(2), tau(1), virtual(3))


def test_parse_identity_token():
    w = parse_word("1", 3)
    assert w == BraidWord(3)
    assert format_word(w) == "1"


@pytest.mark.parametrize(
    "text, n",
    [
        ("s3", 3),
        ("x1", 3),
        ("s0", 3),
        ("s1 1", 3),
        ("s", 3),
        ("s1", 0),
    ],
)
def test_parse_rejects(text, n):
    with pytest.raises(WordParseError):
        parse_word(text, n)


def test_index_bound_message_names_the_limit():
    with pytest.raises(WordParseError, match="exceeds n-1=2"):
        parse_word("s3", 3)


def test_format_then_parse_is_identity():
    for text in ("s1 S2 t1 v3", "v2 v2 t1", "1"):
        w = parse_word(text, 4)
        assert parse_word(format_word(w), 4) == w


def test_word_json(tmp_path):
    w = parse_word("t1 v2", 3)
    assert word_to_json(w) == {"n": 3, "word": "t1 v2"}
    path = tmp_path / "w.json"
    path.write_text(json.dumps(word_to_json(w)))
    assert load_word(path) == w
    with pytest.raises(WordParseError):
        word_from_json({"word": "s1"})


def test_braid_word_checks_indices():
    with pytest.raises(PreconditionError):
        BraidWord(2, (sigma(2),))


# ── Monoid operations ────────────────────────────────────────────────────

def test_compose_concatenates_top_to_bottom():
    assert compose(BraidWord(3, (sigma(1),)), BraidWord(3, (virtual(2),))).letters == (sigma(1), virtual(2))
    w = parse_word("s1 t2", 3)
    assert compose(BraidWord(3), w) == w
    assert compose(w, BraidWord(3)) == w


def test_compose_needs_same_strands():
    with pytest.raises(PreconditionError):
        compose(BraidWord(2), BraidWord(3))


def test_invert():
    assert invert(BraidWord(3, (sigma(1), virtual(2)))).letters == (virtual(2), sigma_inv(1))
    assert invert(BraidWord(3)) == BraidWord(3)
    with pytest.raises(PreconditionError, match="not invertible"):
        invert(BraidWord(2, (tau(1),)))


def test_word_times_inverse_reduces_to_identity():
    w = parse_word("s1 v2 S1 s2 v1", 3)
    assert free_reduce(compose(w, invert(w))) == BraidWord(3)


@pytest.mark.parametrize(
    "text, expected",
    [
        ("s1 S1", "1"),
        ("v2 v2 t1", "t1"),
        ("s1 v2", "s1 v2"),
        ("s1 v2 v2 S1 t1", "t1"),
        ("t1 t1", "t1 t1"),
    ],
)
def test_free_reduce(text, expected):
    w = free_reduce(parse_word(text, 3))
    assert format_word(w) == expected
    assert free_reduce(w) == w


def test_free_reduce_keeps_invariants():
    w = parse_word("v1 s2 S2 v1 t2 s1 S1", 3)
    r = free_reduce(w)
    assert permutation_image(r) == permutation_image(w)
    assert tau_count(r) == tau_count(w)
    assert sigma_exponent_sum(r) == sigma_exponent_sum(w)


# ── Invariants ───────────────────────────────────────────────────────────

def test_permutation_scans_top_to_bottom():
    assert permutation_image(parse_word("s1 s2", 3)).image == (3, 1, 2)
    assert permutation_image(BraidWord(3)) == Permutation.identity(3)
    assert permutation_image(parse_word("v1", 2)).image == (2, 1)


def test_permutation_is_multiplicative():
    a, b = parse_word("s1 t2", 3), parse_word("v2 S1 v1", 3)
    assert permutation_image(compose(a, b)) == permutation_image(a).then(permutation_image(b))


def test_permutation_cycles():
    assert Permutation((3, 1, 2)).cycles() == [(1, 3, 2)]
    assert Permutation((1, 2)).cycles() == [(1,), (2,)]
    with pytest.raises(PreconditionError):
        Permutation((1, 1))


def test_tau_count():
    assert tau_count(BraidWord(3, (tau(1), sigma(2), tau(1)))) == 2
    assert tau_count(BraidWord(3)) == 0
    assert tau_count(parse_word("s1 s2 t1", 3)) == tau_count(parse_word("t2 s1 s2", 3)) == 1


def test_sigma_exponent_sum():
    assert sigma_exponent_sum(parse_word("s1 S2 s2", 3)) == 1
    assert sigma_exponent_sum(parse_word("v1 t2", 3)) == 0
    assert sigma_exponent_sum(parse_word("s1 s2 s1", 3)) == sigma_exponent_sum(parse_word("s2 s1 s2", 3)) == 3


@pytest.mark.parametrize("text, n, expected", [("1", 3, 3), ("s1", 2, 1), ("s1 s2", 3, 1), ("s1 s1", 2, 2)])
def test_closure_component_count(text, n, expected):
    assert closure_component_count(parse_word(text, n)) == expected
