"""
VSBraid - Command Line Tests
=============================
Every subcommand in-process through cli.run: exit codes, exact output, and
byte-identical reruns.
"""

import json
from pathlib import Path

import pytest

import cli
from vsb import config
from vsb.diagram import MorseDiagram, MorseEvent, diagram_to_json

SCRIPTS = Path(__file__).resolve().parent / "vsb" / "scripts"
GOLDEN = Path(__file__).resolve().parent / "golden"
UNKNOT = MorseDiagram((MorseEvent.cup(1), MorseEvent.cap(1)))


# ── Word core ────────────────────────────────────────────────────────────

def test_normalize(run_cli):
    assert run_cli("normalize", "-n", "2", "s1 S1 t1") == (0, "t1\n", "")


def test_parse_error_exits_one(run_cli):
    code, out, err = run_cli("parse", "-n", "3", "s3")
    assert code == 1
    assert out == ""
    assert "exceeds n-1=2" in err


def test_parse_json(run_cli):
    code, out, _ = run_cli("parse", "-n", "4", "s1 S2 t1 v3", "--json")
    assert code == 0
    assert json.loads(out) == {"n": 4, "word": "s1 S2 t1 v3"}


def test_compose_and_invert(run_cli):
    assert run_cli("compose", "-n", "3", "s1", "v2")[1] == "s1 v2\n"
    assert run_cli("invert", "-n", "3", "s1 v2")[1] == "v2 S1\n"
    assert run_cli("invert", "-n", "2", "t1")[0] == 1


def test_perm_and_counts(run_cli):
    assert run_cli("perm", "-n", "3", "s1 s2")[1] == "3 1 2\n"
    code, out, _ = run_cli("perm", "-n", "3", "s1 s2", "--json")
    assert json.loads(out) == {"image": [3, 1, 2], "cycles": [[1, 3, 2]]}
    assert run_cli("counts", "-n", "3", "s1 s2")[1] == "tau_count 0\nsigma_exponent_sum 2\nclosure_component_count 1\n"


def test_word_from_stdin(run_cli):
    assert run_cli("normalize", "-n", "2", "-", stdin=b"s1 S1\n") == (0, "1\n", "")


def test_word_from_file(run_cli, write_json):
    path = write_json("w.json", {"n": 3, "word": "v2 v2 t1"})
    assert run_cli("normalize", "-n", "3", "@" + path)[1] == "t1\n"
    assert run_cli("normalize", "-n", "4", "@" + path)[0] == 1


# ── Relations ────────────────────────────────────────────────────────────

def test_relations_on_two_strands(run_cli):
    code, out, _ = run_cli("relations", "-n", "2")
    assert code == 0
    assert out.splitlines() == [
        "InvCancel(1,1): s1 S1 = 1",
        "InvCancel(1,-1): S1 s1 = 1",
        "VirtInvol(1): v1 v1 = 1",
        "RS1(1): s1 t1 = t1 s1",
    ]


def test_reduced_relations(run_cli):
    out = run_cli("reduced-relations", "-n", "3")[1]
    assert "BaseR3(): s1 v1 v2 s1 v2 v1 s1 = v1 v2 s1 v2 v1 s1 v1 v2 s1 v2 v1" in out.splitlines()
    assert "Base23" not in out


def test_apply(run_cli):
    assert run_cli("apply", "-n", "3", "s1 s2 s1", "--rel", "R3(1,2)", "--pos", "0")[1] == "s2 s1 s2\n"
    assert run_cli("apply", "-n", "2", "1", "--rel", "VirtInvol(1)", "--pos", "0", "--dir", "expand")[1] == "v1 v1\n"
    code, _, err = run_cli("apply", "-n", "3", "s1 s2", "--rel", "R3(1,2)", "--pos", "0")
    assert code == 1
    assert "no match" in err


def test_neighbors(run_cli):
    out = run_cli("neighbors", "-n", "2", "1", "--max-len", "2")[1]
    assert out.splitlines() == ["s1 S1", "S1 s1", "v1 v1"]


def test_equiv_found(run_cli):
    code, out, _ = run_cli("equiv", "-n", "3", "s1 s2 s1", "s2 s1 s2")
    assert code == 0
    assert out.splitlines()[0] == "Equivalent (1 steps)"
    code, out, _ = run_cli("equiv", "-n", "3", "t1 s2 s1", "s2 s1 t2", "--json")
    data = json.loads(out)
    assert data["result"] == "Equivalent"
    assert len(data["witness"]["steps"]) == 1


def test_equiv_witness_replays(run_cli, write_json):
    out = run_cli("equiv", "-n", "3", "v1 v2 v1 v2 v1 v2", "1", "--json")[1]
    path = write_json("witness.json", json.loads(out)["witness"])
    assert run_cli("check-script", path, "--rels", "original") == (0, "Valid\n", "")


def test_equiv_proven_inequivalent(run_cli):
    code, out, _ = run_cli("equiv", "-n", "2", "t1", "s1")
    assert code == 2
    assert "never equivalent" in out


@pytest.mark.parametrize("a, b", [("v1 s2 s1", "s2 s1 v2"), ("v1 t2 t1", "t2 t1 v2")])
def test_forbidden_moves_are_not_connected(run_cli, a, b):
    code, out, _ = run_cli("equiv", "-n", "3", a, b, "--max-len", "9", "--max-states", "3000")
    assert code == 2
    assert out.startswith("NotFoundWithinBudget")


def test_equiv_rejects_bad_budget(run_cli):
    assert run_cli("equiv", "-n", "2", "s1", "s1", "--max-states", "0")[0] == 1


# ── Reduced presentation and lemmas ──────────────────────────────────────

def test_expand(run_cli):
    assert run_cli("expand", "-n", "4", "t3")[1] == "v2 v1 v3 v2 t1 v2 v3 v1 v2\n"


def test_check_bundled_script(run_cli):
    assert run_cli("check-script", str(SCRIPTS / "lemma1__3_1.json")) == (0, "Valid\n", "")


def test_check_broken_script(run_cli, write_json):
    path = write_json(
        "bad.json",
        {"n": 2, "start": "S1 s1", "end": "1", "steps": [{"rel": "InvCancel", "params": [1, 1], "pos": 0, "dir": "L2R"}]},
    )
    code, out, _ = run_cli("check-script", path)
    assert code == 1
    assert out.startswith("Invalid at 0: no match")


def test_verify_shift(run_cli):
    assert run_cli("verify-shift", "-i", "3", "-j", "1", "-n", "4")[0] == 0
    assert run_cli("verify-shift", "-i", "2", "-j", "1", "-n", "4")[0] == 1


def test_verify_single_lemma(run_cli):
    code, out, _ = run_cli("verify-lemmas", "--lemma", "7", "--indices", "2", "-n", "3")
    assert code == 0
    assert out.startswith("lemma7(2): Verified")
    code, out, _ = run_cli("verify-lemmas", "--lemma", "2", "--indices", "3,1", "--variant", "tau", "-n", "4")
    assert code == 0
    assert out.startswith("lemma2[tau](3,1): Verified (script")


def test_verify_lemmas_needs_a_target(run_cli):
    code, _, err = run_cli("verify-lemmas", "-n", "3")
    assert code == 1
    assert "--all" in err


def test_verify_all_lemmas(run_cli):
    code, out, _ = run_cli("verify-lemmas", "--all", "-n", "3")
    lines = out.splitlines()
    assert code == 0
    assert all("Verified" in line for line in lines[:-1])
    verified, total = lines[-1].split()[0].split("/")
    assert verified == total


# ── Diagrams ─────────────────────────────────────────────────────────────

def test_validate(run_cli, write_json):
    assert run_cli("validate", write_json("unknot.json", UNKNOT)) == (0, "Valid\n", "")
    broken = write_json("cap.json", {"events": [{"kind": "cap", "pos": 1}]})
    assert run_cli("validate", broken) == (1, "Invalid at 0: cap with no live strands\n", "")


def test_close(run_cli):
    code, out, _ = run_cli("close", "-n", "1", "1")
    assert code == 0
    assert json.loads(out) == diagram_to_json(UNKNOT)


def test_invariants(run_cli, write_json):
    out = run_cli("invariants", write_json("unknot.json", UNKNOT))[1]
    assert out == "component_count 1\nreal_neg 0\nreal_pos 0\nsingular 0\nvirtual_count 0\n"


def test_braid(run_cli, write_json):
    assert run_cli("braid", write_json("unknot.json", UNKNOT)) == (0, "n=1 1\n", "")
    code, out, _ = run_cli("braid", write_json("missing.json", {"events": []}))
    assert code == 1


def test_close_then_braid_round_trip(run_cli, tmp_path):
    out = run_cli("close", "-n", "3", "t1 s2 v1")[1]
    path = tmp_path / "d.json"
    path.write_text(out)
    code, braided, _ = run_cli("braid", str(path), "--json")
    assert code == 0
    word = json.loads(braided)
    closed = run_cli("close", "-n", str(word["n"]), word["word"])[1]
    (tmp_path / "e.json").write_text(closed)
    before = json.loads(run_cli("invariants", str(path), "--json")[1])
    after = json.loads(run_cli("invariants", str(tmp_path / "e.json"), "--json")[1])
    for key in ("component_count", "real_pos", "real_neg", "singular"):
        assert before[key] == after[key]


# ── Markov ───────────────────────────────────────────────────────────────

def test_shift_and_widen(run_cli):
    assert run_cli("shift", "-n", "2", "s1")[1] == "n=3 s2\n"
    assert run_cli("widen", "-n", "2", "s1")[1] == "n=3 s1\n"


def test_markov_move(run_cli):
    assert run_cli("markov", "-n", "2", "s1", "--move", "StabVirtualRight")[1] == "n=3 s1 v2\n"
    assert run_cli("markov", "-n", "2", "s1", "--move", "UnderThreadRight")[1] == "n=3 s1 S2 v1 s2\n"
    assert run_cli("markov", "-n", "2", "v1 s1", "--move", "ConjVirtual", "--index", "1")[1] == "n=2 s1 v1\n"
    assert run_cli("markov", "-n", "3", "s1 v2", "--move", "StabVirtualRight", "--inverse")[1] == "n=2 s1\n"
    assert run_cli("markov", "-n", "2", "s1", "--move", "ConjReal")[0] == 1


def test_markov_neighbors(run_cli):
    lines = run_cli("markov-neighbors", "-n", "1", "1")[1].splitlines()
    assert {"n=2 v1", "n=2 s1", "n=2 S1"} <= set(lines)


def test_markov_equiv(run_cli):
    code, out, _ = run_cli("markov-equiv", "-n", "2", "s1", "-m", "1", "1")
    assert code == 0
    assert out.startswith("Equivalent")
    code, out, _ = run_cli("markov-equiv", "-n", "2", "t1", "-m", "1", "1")
    assert code == 2
    assert "tau counts differ" in out


def test_markov_witness_replays_through_check_trace(run_cli, tmp_path):
    code, out, _ = run_cli("markov-equiv", "-n", "2", "s1", "-m", "1", "1", "--json")
    assert code == 0
    witness = json.loads(out)["witness"]
    assert (witness["end"], witness["end_n"]) == ("1", 1)
    path = tmp_path / "trace.json"
    path.write_text(json.dumps(witness))
    assert run_cli("check-trace", str(path)) == (0, "Valid\n", "")


def test_check_trace_with_wrong_end(run_cli, write_json):
    path = write_json("trace.json", {"n": 2, "start": "s1", "end_n": 2, "end": "S1", "steps": []})
    assert run_cli("check-trace", path) == (1, "Invalid at 0: replay ends at s1 on 2 strands\n", "")


# ── Random suites ────────────────────────────────────────────────────────

def test_random_test(run_cli):
    assert run_cli("random-test", "--seed", "3", "--suite", "homomorphism") == (
        0,
        "homomorphism: 200 checked, ok\n",
        "",
    )


# ── Surface ──────────────────────────────────────────────────────────────

def test_usage_error_exits_one(run_cli):
    code, out, err = run_cli("equiv", "-n", "3", "s1")
    assert code == 1
    assert out == ""
    assert "equiv" in err
    assert run_cli()[0] == 1
    assert run_cli("frobnicate")[0] == 1


@pytest.mark.parametrize(
    "argv",
    [
        ("check-script", "{missing}"),
        ("check-trace", "{missing}"),
        ("validate", "{missing}"),
        ("invariants", "{missing}"),
        ("braid", "{missing}"),
        ("parse", "-n", "2", "@{missing}"),
    ],
)
def test_missing_file_exits_one(run_cli, tmp_path, argv):
    missing = str(tmp_path / "absent.json")
    code, out, err = run_cli(*(arg.format(missing=missing) for arg in argv))
    assert code == 1
    assert out == ""
    assert err.startswith(f"error: {missing}: cannot read")


def test_non_utf8_input_exits_one(run_cli, tmp_path):
    path = tmp_path / "latin1.json"
    path.write_bytes(b'{"n": 2, "word": "s1 \xe9"}')
    code, _, err = run_cli("parse", "-n", "2", "@" + str(path))
    assert code == 1
    assert "not UTF-8 text" in err
    assert run_cli("normalize", "-n", "2", "-", stdin=b"s1 \xff") == (1, "", "error: stdin: not UTF-8 text\n")


def test_undecodable_script_exits_one(run_cli, tmp_path):
    path = tmp_path / "script.json"
    path.write_text("{not json", encoding="utf-8")
    code, _, err = run_cli("check-script", str(path))
    assert code == 1
    assert "not valid JSON" in err


def test_verbose_logs_to_stderr(run_cli):
    code, _, err = run_cli("equiv", "-n", "3", "s1 s2 s1", "s2 s1 s2", "-v")
    assert code == 0
    assert "[equiv]" in err


@pytest.mark.parametrize(
    "argv",
    [
        ("normalize", "-n", "3", "s1 S1 v2 t1"),
        ("equiv", "-n", "3", "s1 s2 s1", "s2 s1 s2", "--json"),
        ("markov-neighbors", "-n", "2", "s1"),
        ("close", "-n", "2", "s1 t1"),
        ("random-test", "--suite", "braiding"),
    ],
)
def test_output_is_byte_identical_across_runs(argv):
    assert cli.run(list(argv)) == cli.run(list(argv))


def test_every_operation_has_a_subcommand():
    for operation, command in cli.OPERATIONS.items():
        code, out, _ = cli.run([command, "--help"])
        assert code == 0, operation
        assert b"usage" in out


# ── Golden output ────────────────────────────────────────────────────────

# subcommand -> (argv, exit code); stdout lives in golden/<subcommand>.out
GOLDEN_CASES = {
    "parse": (("parse", "-n", "4", "s1 S2 t1 v3"), 0),
    "compose": (("compose", "-n", "3", "s1", "v2"), 0),
    "invert": (("invert", "-n", "3", "s1 v2"), 0),
    "normalize": (("normalize", "-n", "2", "s1 S1 t1"), 0),
    "perm": (("perm", "-n", "3", "s1 s2"), 0),
    "counts": (("counts", "-n", "3", "s1 s2"), 0),
    "relations": (("relations", "-n", "2"), 0),
    "reduced-relations": (("reduced-relations", "-n", "2"), 0),
    "apply": (("apply", "-n", "3", "s1 s2 s1", "--rel", "R3(1,2)", "--pos", "0"), 0),
    "neighbors": (("neighbors", "-n", "2", "1", "--max-len", "2"), 0),
    "equiv": (("equiv", "-n", "2", "s1 S1", "1"), 0),
    "expand": (("expand", "-n", "4", "t3"), 0),
    "check-script": (("check-script", "{scripts}/lemma7__1.json"), 0),
    "verify-shift": (("verify-shift", "-n", "4", "-i", "1", "-j", "3", "--max-states", "1"), 2),
    "verify-lemmas": (("verify-lemmas", "--lemma", "7", "--indices", "1", "--mode", "script", "-n", "2"), 0),
    "verify-reduction": (("verify-reduction", "-n", "2", "--max-index", "1"), 0),
    "validate": (("validate", "{golden}/closed_s1s2s1.json"), 0),
    "close": (("close", "-n", "2", "s1"), 0),
    "invariants": (("invariants", "{golden}/closed_s1s2s1.json"), 0),
    "braid": (("braid", "{golden}/closed_s1s2s1.json"), 0),
    "shift": (("shift", "-n", "2", "s1"), 0),
    "widen": (("widen", "-n", "2", "s1"), 0),
    "markov": (("markov", "-n", "2", "s1", "--move", "StabVirtualRight"), 0),
    "markov-neighbors": (("markov-neighbors", "-n", "1", "1"), 0),
    "markov-equiv": (("markov-equiv", "-n", "2", "t1", "-m", "1", "1"), 2),
    "check-trace": (("check-trace", "{golden}/destabilise.json"), 0),
    "random-test": (("random-test", "--seed", "3", "--suite", "homomorphism"), 0),
}


def test_every_subcommand_has_a_golden_case():
    assert set(GOLDEN_CASES) == set(cli.OPERATIONS.values())


@pytest.mark.parametrize("command", sorted(set(cli.OPERATIONS.values())))
def test_golden_output(command):
    argv, expected_code = GOLDEN_CASES[command]
    argv = [arg.format(golden=GOLDEN, scripts=config.SCRIPTS_DIR) for arg in argv]
    first = cli.run(argv)
    assert first == cli.run(argv)
    code, out, err = first
    assert (code, err) == (expected_code, b"")
    assert out == (GOLDEN / f"{command}.out").read_bytes()
