"""
VSBraid - Diagram Tests
========================
Validation, tracing, closure and the braiding round trip.
"""

import pytest

from vsb.diagram import (
    CupOrientation,
    EventKind,
    MorseDiagram,
    MorseEvent,
    braid,
    close,
    diagram_from_json,
    diagram_to_json,
    invariants,
    load_diagram,
    save_diagram,
    trace_components,
    validate,
)
from vsb.errors import DiagramError
from vsb.words import BraidWord, closure_component_count, format_word, parse_word

CCW, CW = CupOrientation.CCW, CupOrientation.CW

UNKNOT = MorseDiagram((MorseEvent.cup(1), MorseEvent.cap(1)))

# one strand with a positive kink, entered through a clockwise cup
KINK = MorseDiagram(
    (
        MorseEvent.cup(1, CCW),
        MorseEvent.cup(3, CW),
        MorseEvent(EventKind.REAL_POS, 2),
        MorseEvent.cap(1),
        MorseEvent.cap(1),
    )
)

# same picture, both cups ccw: the crossing strands run opposite ways
TWISTED = MorseDiagram(
    (
        MorseEvent.cup(1, CCW),
        MorseEvent.cup(3, CCW),
        MorseEvent(EventKind.REAL_POS, 2),
        MorseEvent.cap(2),
        MorseEvent.cap(1),
    )
)


# ── Validation ───────────────────────────────────────────────────────────

def test_unknot_is_valid():
    assert validate(UNKNOT).ok


@pytest.mark.parametrize(
    "events, at, reason",
    [
        ((MorseEvent.cap(1),), 0, "cap with no live strands"),
        ((MorseEvent.cup(1),), 1, "diagram not closed"),
        ((), 0, "empty diagram"),
        ((MorseEvent.cup(1), MorseEvent(EventKind.REAL_POS, 2), MorseEvent.cap(1)), 1, "out of range"),
        ((MorseEvent.cup(3), MorseEvent.cap(1)), 0, "out of range"),
        ((MorseEvent(EventKind.CUP, 1), MorseEvent.cap(1)), 0, "cup without orientation"),
    ],
)
def test_invalid_diagrams(events, at, reason):
    verdict = validate(MorseDiagram(events))
    assert not verdict.ok
    assert verdict.at == at
    assert reason in verdict.reason


def test_cup_orientation_must_agree_with_the_component():
    d = MorseDiagram(
        (
            MorseEvent.cup(1, CCW),
            MorseEvent.cup(3, CW),
            MorseEvent(EventKind.REAL_POS, 2),
            MorseEvent.cap(2),
            MorseEvent.cap(1),
        )
    )
    verdict = validate(d)
    assert not verdict.ok
    assert verdict.at == 1
    assert "orientation" in verdict.reason


def test_invariants_refuse_invalid_diagrams():
    with pytest.raises(DiagramError):
        invariants(MorseDiagram((MorseEvent.cap(1),)))


# ── JSON ─────────────────────────────────────────────────────────────────

def test_diagram_json(tmp_path):
    path = tmp_path / "kink.json"
    save_diagram(KINK, path)
    assert load_diagram(path) == KINK
    assert diagram_to_json(UNKNOT) == {
        "events": [{"kind": "cup", "pos": 1, "orient": "ccw"}, {"kind": "cap", "pos": 1}]
    }


@pytest.mark.parametrize(
    "payload",
    [
        {"events": [{"kind": "cup"}]},
        {"events": [{"kind": "cap", "pos": 1, "orient": "ccw"}]},
        {"events": [{"kind": "loop", "pos": 1}]},
        {"events": [{"kind": "cap", "pos": True}]},
        {"rows": []},
    ],
)
def test_malformed_diagram_json(payload):
    with pytest.raises(DiagramError):
        diagram_from_json(payload)


def test_bad_json_file(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{")
    with pytest.raises(DiagramError):
        load_diagram(path)


# ── Tracing and invariants ───────────────────────────────────────────────

def test_unknot_invariants():
    inv = invariants(UNKNOT)
    assert inv.to_json() == {"component_count": 1, "real_pos": 0, "real_neg": 0, "singular": 0, "virtual_count": 0}


def test_kink_is_positive():
    inv = invariants(KINK)
    assert inv.component_count == 1
    assert (inv.real_pos, inv.real_neg) == (1, 0)


def test_opposite_strands_flip_the_sign():
    inv = invariants(TWISTED)
    assert inv.component_count == 1
    assert (inv.real_pos, inv.real_neg) == (0, 1)


def test_components_record_each_crossing_twice():
    (component,) = trace_components(KINK)
    assert sorted(p.strand for p in component) == [1, 2]
    assert all(p.row == 2 for p in component)


# ── Closure ──────────────────────────────────────────────────────────────

def test_close_identity_on_one_strand():
    assert close(BraidWord(1)) == UNKNOT


@pytest.mark.parametrize(
    "text, n, expected",
    [
        ("s1", 2, (1, 1, 0, 0, 0)),
        ("t1", 2, (1, 0, 0, 1, 0)),
        ("s1 s1", 2, (2, 2, 0, 0, 0)),
        ("t1 v1", 2, (2, 0, 0, 1, 1)),
        ("S1 s2 v1", 3, (2, 1, 1, 0, 1)),
        ("1", 3, (3, 0, 0, 0, 0)),
    ],
)
def test_closure_invariants(text, n, expected):
    w = parse_word(text, n)
    d = close(w)
    assert validate(d).ok
    inv = invariants(d)
    assert (inv.component_count, inv.real_pos, inv.real_neg, inv.singular, inv.virtual_count) == expected
    assert inv.component_count == closure_component_count(w)


# ── Braiding ─────────────────────────────────────────────────────────────

def test_braid_of_the_unknot_is_empty():
    w = braid(UNKNOT)
    assert w == BraidWord(1)


def test_braid_of_the_kink():
    w = braid(KINK)
    assert (w.n, format_word(w)) == (2, "s1")


def test_braid_of_the_twisted_kink():
    w = braid(TWISTED)
    assert (w.n, format_word(w)) == (2, "S1")


@pytest.mark.parametrize(
    "text, n",
    [("s1", 2), ("t1 s2 v1", 3), ("S1 S1 t1", 2), ("v1 v2 s1 t2", 3), ("1", 2), ("s1 s2 s3 t1", 4)],
)
def test_braiding_round_trip(text, n):
    d = close(parse_word(text, n))
    out = braid(d)
    before, after = invariants(d), invariants(close(out))
    assert after.without_virtual() == before.without_virtual()
    assert after.virtual_count >= before.virtual_count


def test_braiding_keeps_a_diagram_with_opposite_strands():
    out = braid(TWISTED)
    assert invariants(close(out)).without_virtual() == invariants(TWISTED).without_virtual()


# ── Braiding a closure ───────────────────────────────────────────────────

@pytest.mark.parametrize(
    "text, n",
    [("s1 s2 s1", 3), ("t1 s2 v1", 3), ("S1 S1 t1", 2), ("s1 s2 s3 t1", 4), ("v1 v2 s1 t2", 3), ("1", 3)],
)
def test_braiding_a_closure_reads_back_the_word(text, n):
    w = parse_word(text, n)
    assert braid(close(w)) == w


def test_closure_of_three_strands_stays_on_three():
    d = close(parse_word("s1 s2 s1", 3))
    out = braid(d)
    assert out.n == 3
    assert invariants(close(out)) == invariants(d)


def test_crossed_closing_arcs_become_a_virtual_crossing():
    # two nested ccw cups: the down strands sit in columns 1 and 3 and swap on the way round
    d = MorseDiagram(
        (
            MorseEvent.cup(1, CCW),
            MorseEvent.cup(1, CCW),
            MorseEvent.cap(2),
            MorseEvent.cap(1),
        )
    )
    assert invariants(d).component_count == 1
    assert braid(d) == parse_word("v1", 2)
    assert invariants(close(braid(d))).without_virtual() == invariants(d).without_virtual()
