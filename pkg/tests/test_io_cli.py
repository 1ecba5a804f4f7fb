import json

import pytest

from elliskit.cli import main
from elliskit.errors import ParseError, ValidationError
from elliskit.io import parse_instance, parse_obj, serialize_instance
from elliskit.suites import run_suite


S3_FLOW = {
    "group": {"kind": "permutation", "degree": 3,
              "generators": [[1, 0, 2], [1, 2, 0]]},
    "points": 3,
    "action": "natural",
}


def write(tmp_path, name, data):
    p = tmp_path / name
    p.write_text(json.dumps(data))
    return str(p)


# ---- parsing ------------------------------------------------------------------

def test_parse_flow(tmp_path):
    inst = parse_instance(write(tmp_path, "f.json", S3_FLOW))
    assert inst.kind == "flow"
    assert inst.value.points == 3


def test_parse_ambit(tmp_path):
    data = dict(S3_FLOW, basepoint=0)
    inst = parse_instance(write(tmp_path, "a.json", data))
    assert inst.kind == "ambit"
    assert inst.value.basepoint == 0


def test_parse_relation_and_validation(tmp_path):
    inst = parse_instance(write(tmp_path, "r.json",
                                {"points": 3, "classes": [[0, 1], [2]]}))
    assert inst.kind == "relation"
    with pytest.raises(ValidationError):
        parse_instance(write(tmp_path, "bad.json",
                             {"points": 3, "classes": [[0, 1], [1, 2]]}))


def test_parse_group_kinds(tmp_path):
    table = {"kind": "table", "mul": [[0, 1], [1, 0]]}
    named = {"kind": "named", "name": "cyclic", "n": 5}
    assert parse_instance(write(tmp_path, "t.json", table)).value.order == 2
    assert parse_instance(write(tmp_path, "n.json", named)).value.order == 5


def test_parse_transformation_flow(tmp_path):
    data = {"transformations": [[1, 0], [0, 0]], "points": 2}
    inst = parse_instance(write(tmp_path, "tf.json", data))
    assert inst.kind == "flow"
    assert not inst.value.is_group_flow


def test_parse_regular_action(tmp_path):
    data = {"group": {"kind": "named", "name": "cyclic", "n": 4},
            "action": "regular"}
    inst = parse_instance(write(tmp_path, "reg.json", data))
    assert inst.value.points == 4


def test_parse_generator_images(tmp_path):
    # the permutation group acts through explicitly supplied generator maps
    data = {
        "group": {"kind": "permutation", "degree": 3,
                  "generators": [[1, 0, 2], [1, 2, 0]]},
        "points": 6,
        "action": {"generator_images": [
            [1, 0, 2, 4, 3, 5], [1, 2, 0, 4, 5, 3]]},
    }
    inst = parse_instance(write(tmp_path, "gi.json", data))
    assert inst.value.points == 6


def test_parse_inconsistent_generator_images(tmp_path):
    data = {
        "group": {"kind": "permutation", "degree": 3,
                  "generators": [[1, 0, 2], [1, 2, 0]]},
        "points": 3,
        # the transposition image has order 3: the group relations fail
        "action": {"generator_images": [[1, 2, 0], [1, 2, 0]]},
    }
    with pytest.raises(ValidationError):
        parse_instance(write(tmp_path, "bad.json", data))


def test_parse_lattice(tmp_path):
    data = {"ground": "X", "size": 3, "sets": [[0], [1]], "auto_complete": True}
    inst = parse_instance(write(tmp_path, "l.json", data))
    assert inst.kind == "lattice"
    assert inst.value.contains(frozenset({0, 1}))


def test_parse_scenario(tmp_path):
    data = {
        "flow": S3_FLOW,
        "relation": {"points": 3, "classes": [[0, 1, 2]]},
        "lattices": {"G": "discrete", "X": "discrete"},
    }
    inst = parse_instance(write(tmp_path, "s.json", data))
    assert inst.kind == "scenario"


def test_parse_errors(tmp_path):
    p = tmp_path / "broken.json"
    p.write_text("{not json")
    with pytest.raises(ParseError):
        parse_instance(str(p))
    with pytest.raises(ParseError):
        parse_instance(str(tmp_path / "missing.json"))


def test_roundtrip_all_kinds(tmp_path):
    instances = [
        {"kind": "named", "name": "cyclic", "n": 4},
        S3_FLOW,
        dict(S3_FLOW, basepoint=0),
        {"points": 3, "classes": [[0, 1], [2]]},
        {"ground": "X", "size": 2, "sets": [[0]], "auto_complete": False},
        {"flow": S3_FLOW, "relation": {"points": 3, "classes": [[0, 1, 2]]},
         "lattices": {"G": "discrete", "X": "discrete"}},
    ]
    for data in instances:
        first = parse_obj(data)
        text = serialize_instance(first)
        second = parse_obj(json.loads(text))
        assert first.kind == second.kind
        assert first.raw == second.raw


# ---- suite determinism -----------------------------------------------------------

def test_suite_reports_deterministic():
    a = run_suite("ellis", 12, seed=5)
    b = run_suite("ellis", 12, seed=5)
    assert a.to_json(include_timing=False) == b.to_json(include_timing=False)
    c = run_suite("ellis", 12, seed=6)
    assert a.to_json(include_timing=False) != c.to_json(include_timing=False)


def test_empty_suite_passes():
    rep = run_suite("orbital", 0, seed=1)
    assert rep.passed


def test_corrupted_suite_fails():
    rep = run_suite("grouplike", 1, seed=1, corrupt=True)
    assert not rep.passed and rep.failure_count == 1


# ---- CLI ---------------------------------------------------------------------------

def test_cli_example(capsys):
    assert main(["example", "s3-stabilizer"]) == 0
    out = capsys.readouterr().out
    assert "PASS" in out


def test_cli_example_json(capsys):
    assert main(["example", "tower-demo", "--format", "json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["passed"] is True


def test_cli_verify_exit_codes(capsys):
    assert main(["verify", "--suite", "orbital", "--instances", "0",
                 "--seed", "1"]) == 0
    assert main(["verify", "--suite", "grouplike", "--instances", "1",
                 "--seed", "1", "--corrupt"]) == 1


def test_cli_analyze(tmp_path, capsys):
    flow_path = write(tmp_path, "f.json", dict(S3_FLOW, basepoint=0))
    rel_path = write(tmp_path, "r.json",
                     {"points": 3, "classes": [[0], [1], [2]]})
    assert main(["analyze", flow_path, "--relation", rel_path,
                 "--format", "json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["structures"]["identified_group_order"] == 6
    assert data["structures"]["stabilizer_order"] == 2


def test_cli_analyze_non_invariant_exits_zero(tmp_path, capsys):
    G = {"kind": "permutation", "degree": 6,
         "generators": [[1, 2, 3, 4, 5, 0]]}
    flow_path = write(tmp_path, "f.json",
                      {"group": G, "points": 6, "action": "natural"})
    rel_path = write(tmp_path, "r.json",
                     {"points": 6, "classes": [[0, 1], [2], [3], [4], [5]]})
    assert main(["analyze", flow_path, "--relation", rel_path]) == 0


def test_cli_ellis(tmp_path, capsys):
    flow_path = write(tmp_path, "f.json",
                      {"transformations": [[1, 0], [0, 0]], "points": 2})
    assert main(["ellis", flow_path, "--format", "json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["structures"]["closure_size"] == 4


def test_cli_grouplike(tmp_path, capsys):
    amb = write(tmp_path, "a.json",
                {"group": {"kind": "named", "name": "cyclic", "n": 6},
                 "action": "regular", "basepoint": 0})
    rel = write(tmp_path, "r.json",
                {"points": 6, "classes": [[0, 3], [1, 4], [2, 5]]})
    assert main(["grouplike", amb, "--relation", rel, "--format", "json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["structures"]["group_like"] is True
    assert data["structures"]["quotient_order"] == 3


def test_cli_orbital(tmp_path, capsys):
    flow = write(tmp_path, "f.json",
                 {"group": {"kind": "named", "name": "cyclic", "n": 4},
                  "action": "natural"})
    rel = write(tmp_path, "r.json", {"points": 4, "classes": [[0, 2], [1, 3]]})
    assert main(["orbital", flow, "--relation", rel, "--decide-weak",
                 "--format", "json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["structures"]["orbital"] is True
    assert data["structures"]["weakly_orbital"] is True


def test_cli_structured(tmp_path, capsys):
    scenario = write(tmp_path, "s.json", {
        "flow": S3_FLOW,
        "relation": {"points": 3, "classes": [[0, 1, 2]]},
        "lattices": {"G": "discrete", "X": "discrete"},
    })
    assert main(["structured", scenario]) == 0


def test_cli_input_error_exit_2(tmp_path):
    p = tmp_path / "broken.json"
    p.write_text("{")
    assert main(["analyze", str(p)]) == 2


def test_cli_unknown_example():
    with pytest.raises(SystemExit):
        main(["example", "not-a-fixture"])
