import json

import jsonschema
import pytest

from bicumulant.cli import main
from bicumulant.expr import parse
from bicumulant.cumulants import lhs_product
from bicumulant.expr import Shape

REPORT_SCHEMA = {
    "type": "array",
    "items": {
        "type": "object",
        "required": ["law", "shape", "equal", "lhs_terms", "rhs_terms", "mismatch", "millis"],
        "properties": {
            "law": {"type": "string"},
            "shape": {"type": ["array", "null"], "items": {"type": "integer", "minimum": 1}},
            "equal": {"type": "boolean"},
            "lhs_terms": {"type": ["integer", "null"]},
            "rhs_terms": {"type": ["integer", "null"]},
            "mismatch": {
                "type": ["object", "null"],
                "required": ["term", "lhs", "rhs"],
            },
            "millis": {"type": ["number", "null"]},
            "detail": {"type": "object"},
        },
    },
}

ENUM_SCHEMA = {
    "type": "object",
    "required": ["kind", "shape", "filter", "count", "items"],
    "properties": {
        "count": {"type": "integer", "minimum": 0},
        "items": {"type": "array"},
    },
}

MODEL_SCHEMA = {
    "type": "array",
    "items": {
        "type": "object",
        "required": ["law", "shape", "seed", "trials", "equal", "failure"],
        "properties": {
            "equal": {"type": "boolean"},
            "failure": {
                "type": ["object", "null"],
                "required": ["trial", "assignment", "lhs", "rhs"],
            },
        },
    },
}


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.mark.parametrize(
    "kind,filt,count",
    [
        ("forests", "all", 8),
        ("forests", "mixing", 6),
        ("forests", "strongly-mixing", 5),
        ("trees", "all", 4),
        ("partitions", "all", 5),
        ("partitions", "mixing", 3),
    ],
)
def test_enumerate_counts(capsys, kind, filt, count):
    code, out, _ = run(capsys, "enumerate", kind, "--shape", "2,1", "--filter", filt)
    assert code == 0
    lines = out.splitlines()
    assert lines[-1] == f"count: {count}"
    assert len(lines) == count + 1
    code, out, _ = run(capsys, "enumerate", kind, "--shape", "2,1", "--filter", filt, "--format", "json")
    data = json.loads(out)
    jsonschema.validate(data, ENUM_SCHEMA)
    assert data["count"] == len(data["items"]) == count


def test_enumerate_mixing_w_values(capsys):
    _, out, _ = run(capsys, "enumerate", "forests", "--shape", "2,1", "--filter", "mixing", "--format", "json")
    ws = sorted(item["w"] for item in json.loads(out)["items"])
    assert ws == [0, 1, 1, 1, 2, 2]


def test_enumerate_w_infinite_is_null(capsys):
    _, out, _ = run(capsys, "enumerate", "forests", "--shape", "2,1", "--format", "json")
    ws = [item["w"] for item in json.loads(out)["items"]]
    assert ws.count(None) == 2


def test_enumerate_colourings_and_sequences(capsys):
    _, out, _ = run(capsys, "enumerate", "colourings", "--shape", "1,1")
    assert out.splitlines()[-1] == "count: 2"
    _, out, _ = run(capsys, "enumerate", "sequences", "--shape", "1,1", "--filter", "mixing", "--format", "json")
    data = json.loads(out)
    assert data["count"] == 1
    assert data["items"][0]["levels"] == [[["a1_1", "a2_1"]]]


def test_expand_text_is_left_side(capsys):
    code, out, _ = run(capsys, "expand", "--shape", "2,1")
    assert code == 0
    assert parse(out.strip()) == lhs_product(Shape((2, 1)))


def test_expand_json_and_latex(capsys):
    _, out, _ = run(capsys, "expand", "--shape", "2,1", "--format", "json")
    data = json.loads(out)
    assert len(data["forests"]) == 6
    assert sorted(f["sign"] for f in data["forests"]) == [-1, -1, -1, 1, 1, 1]
    assert parse(data["expanded"]) == lhs_product(Shape((2, 1)))
    _, out, _ = run(capsys, "expand", "--shape", "2,1", "--format", "latex")
    assert out.count("\\kappa") >= 6


def test_expand_dual_analogue(capsys):
    code, out, _ = run(capsys, "expand", "--shape", "2,1", "--law", "dual-analogue", "--format", "json")
    assert code == 0
    assert len(json.loads(out)["forests"]) == 5


def test_verify_json(capsys):
    code, out, err = run(capsys, "verify", "--law", "main", "--max-size", "3")
    assert code == 0
    data = json.loads(out)
    jsonschema.validate(data, REPORT_SCHEMA)
    assert all(r["equal"] for r in data)
    assert len(data) == 7
    assert "7/7" in err


def test_verify_all_laws(capsys):
    code, out, _ = run(capsys, "verify", "--law", "all", "--shape", "2,1")
    assert code == 0
    jsonschema.validate(json.loads(out), REPORT_SCHEMA)


def test_verify_alias_and_text(capsys):
    code, out, _ = run(capsys, "verify", "--law", "ls-classical", "--shape", "2,2", "--format", "text")
    assert code == 0
    lines = out.splitlines()
    assert len(lines) == 2 and all(line.startswith("PASS") for line in lines)


def test_verify_paths(capsys):
    code, out, _ = run(capsys, "verify", "--law", "path-fg", "--arity", "3", "--max-coord", "2")
    assert code == 0
    (report,) = json.loads(out)
    assert report["equal"] and report["shape"] is None


def test_verify_timing_flag(capsys):
    _, out, _ = run(capsys, "verify", "--law", "main", "--shape", "1,1", "--timing")
    assert isinstance(json.loads(out)[0]["millis"], (int, float))


def test_output_is_deterministic(capsys):
    argv = ("verify", "--law", "all", "--shape", "2,1")
    first = run(capsys, *argv)[1]
    assert run(capsys, *argv)[1] == first
    argv = ("enumerate", "colourings", "--shape", "2,2", "--format", "json")
    first = run(capsys, *argv)[1]
    assert run(capsys, *argv)[1] == first


def test_model_command(capsys):
    code, out, _ = run(capsys, "model", "--law", "all", "--shape", "2,1", "--seed", "3", "--trials", "4")
    assert code == 0
    data = json.loads(out)
    jsonschema.validate(data, MODEL_SCHEMA)
    assert len(data) == 5


def test_model_degrees(capsys):
    _, out, _ = run(capsys, "model", "--law", "main", "--shape", "2,1", "--degrees")
    assert len(json.loads(out)[0]["degrees"]) == 6


def test_model_failure_exit_code(capsys):
    code, out, err = run(capsys, "model", "--law", "main", "--shape", "2,1", "--corrupt")
    assert code == 1
    data = json.loads(out)
    jsonschema.validate(data, MODEL_SCHEMA)
    assert data[0]["failure"]["trial"] == 0
    assert "model mismatch" in err


def test_model_rejects_check_laws(capsys):
    with pytest.raises(SystemExit) as info:
        main(["model", "--law", "halving", "--shape", "2,1"])
    assert info.value.code == 2


@pytest.mark.parametrize(
    "argv",
    [
        ["verify", "--law", "main"],
        ["verify", "--law", "main", "--shape", "2", "--max-size", "2"],
        ["verify", "--law", "path-fg"],
        ["verify", "--law", "path-fg", "--arity", "0", "--max-coord", "1"],
        ["model", "--law", "main", "--shape", "1", "--trials", "0"],
    ],
)
def test_usage_errors(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 2
    assert out == ""
    assert "error" in err


@pytest.mark.parametrize(
    "argv",
    [
        ["enumerate", "forests", "--shape", "0,1"],
        ["enumerate", "forests", "--shape", "x"],
        ["enumerate", "bogus", "--shape", "1"],
        ["verify", "--law", "nope", "--shape", "1"],
    ],
)
def test_argparse_errors(argv):
    with pytest.raises(SystemExit) as info:
        main(argv)
    assert info.value.code == 2


def test_cap_exit_code(capsys):
    code, out, err = run(capsys, "verify", "--law", "main", "--shape", "4,4")
    assert code == 3
    assert out == ""
    assert "--unsafe-cap" in err
    code, _, _ = run(capsys, "enumerate", "forests", "--shape", "1,1,1", "--unsafe-cap", "2")
    assert code == 3


def test_unsafe_cap_allows_larger(capsys):
    code, out, _ = run(capsys, "enumerate", "trees", "--shape", "1,1,1", "--unsafe-cap", "3")
    assert code == 0


def test_module_entry_point():
    import subprocess
    import sys

    proc = subprocess.run(
        [sys.executable, "-m", "bicumulant", "enumerate", "trees", "--shape", "2,1"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[-1] == "count: 4"
