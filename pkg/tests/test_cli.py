import io
import json
import subprocess
import sys

import pytest

from odlin import jsonio
from odlin.cli import run
from odlin.datavec import MatrixInstance
from odlin.linalg import InputError

UP_DOWN = {
    "format": "odlin/1",
    "dimension": 1,
    "target": {"points": [{"datum": "1", "vec": ["1"]}, {"datum": "2", "vec": ["-1"]}]},
    "vectors": [{"points": [{"datum": "1", "vec": ["-1"]}, {"datum": "2", "vec": ["1"]}]}],
}
DEG2 = {"matrix": [[1, 1, 0, 0, 0], [0, 0, 2, 0, 0], [0, 0, 0, 1, 1]]}


@pytest.fixture
def files(tmp_path):
    def write(name, doc):
        p = tmp_path / name
        p.write_text(doc if isinstance(doc, str) else json.dumps(doc))
        return str(p)
    return write


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def test_solve_q_up_down(files):
    code, out, _ = call("solve", "--domain", "Q", "--input", files("i.json", UP_DOWN))
    doc = json.loads(out)
    assert code == 0 and doc["status"] == "solvable" and doc["format"] == "odlin/1"
    assert "-1" in {t["coeff"] for t in doc["witness"]}


def test_solve_qplus_up_down(files):
    code, out, _ = call("solve", "--domain", "Qplus", "--input", files("i.json", UP_DOWN))
    assert code == 1 and json.loads(out)["status"] == "unsolvable"


def test_solve_n_unknown_without_relaxation_refutation(files):
    # 1 = 3 - 2 over Z and 1 = 2/2 over Q+, but no natural combination of 2 and 3 gives 1
    inst = {"dimension": 1, "target": {"points": [{"datum": "1", "vec": ["1"]}]},
            "vectors": [{"points": [{"datum": "1", "vec": ["2"]}]}, {"points": [{"datum": "1", "vec": ["3"]}]}]}
    code, out, _ = call("solve", "--domain", "N", "--input", files("i.json", inst),
                        "--col-bound", "3", "--entry-bound", "3")
    assert code == 2 and json.loads(out)["status"] == "unknown"


def test_hist_decompose(files):
    code, out, _ = call("hist", "decompose", "--input", files("h.json", DEG2))
    doc = json.loads(out)
    assert code == 0
    assert doc["simple"] == [
        [["1", "0", "0", "0", "0"], ["0", "0", "1", "0", "0"], ["0", "0", "0", "1", "0"]],
        [["0", "1", "0", "0", "0"], ["0", "0", "1", "0", "0"], ["0", "0", "0", "0", "1"]],
    ]


def test_hist_validate_and_smear(files):
    assert call("hist", "validate", "--input", files("h.json", DEG2))[0] == 0
    code, out, _ = call("hist", "validate", "--input", files("b.json", {"matrix": [[1, 0], [1, 0]]}))
    assert code == 1 and json.loads(out)["where"] == [0, 0]
    code, out, _ = call("hist", "smear", "--input", files("h.json", DEG2), "--col", "2",
                        "--left", "0,1,0", "--right", "0,1,0")
    assert code == 0 and json.loads(out)["matrix"][1] == ["0", "0", "1", "1", "0", "0"]


def test_verify_round_trip(files):
    inst = files("i.json", UP_DOWN)
    _, out, _ = call("solve", "--domain", "Q", "--input", inst)
    w = files("w.json", out)
    assert call("verify", "--input", inst, "--witness", w)[0] == 0
    assert call("verify", "--input", inst, "--witness", w, "--domain", "N")[0] == 1


def test_oracle_verb(files):
    code, out, _ = call("oracle", "--domain", "Q", "--m-bound", "2", "--slot-bound", "2",
                        "--input", files("i.json", UP_DOWN))
    assert code == 0 and json.loads(out)["slots"] == 2
    assert call("oracle", "--domain", "Qplus", "--input", files("i.json", UP_DOWN))[0] == 2


def test_reduce_both_directions(files, tmp_path):
    vas = files("v.json", {"dimension": 1, "actions": [[-1]], "init": [1], "final": [0]})
    out_path = str(tmp_path / "inst.json")
    assert call("reduce", "from-vas", "--input", vas, "--output", out_path)[0] == 0
    code, out, _ = call("solve", "--domain", "N", "--input", out_path)
    assert code == 0
    assert call("reduce", "to-vas", "--input", out_path, "--alphabet-bound", "1")[0] == 0


def test_output_is_deterministic(files):
    inst = files("i.json", UP_DOWN)
    first = call("solve", "--domain", "Z", "--input", inst)[1]
    assert all(call("solve", "--domain", "Z", "--input", inst)[1] == first for _ in range(3))
    assert first == jsonio.dumps(json.loads(first)) + "\n"


def test_malformed_json_reports_position(files):
    code, _, err = call("hist", "profile", "--input", files("bad.json", '{"matrix": [[1, 2],\n [3'))
    assert code == 4 and "line 2" in err


@pytest.mark.parametrize("argv", [
    [], ["frobnicate"], ["solve", "--domain", "R", "--input", "x"], ["solve", "--input", "x"],
    ["hist", "smear", "--input", "x"], ["solve", "--domain", "Q", "--input", "x", "--bogus"],
])
def test_usage_errors(argv, files):
    argv = [files("x.json", DEG2) if a == "x" else a for a in argv]
    assert call(*argv)[0] == 3


@pytest.mark.parametrize("doc", [
    {"dimension": 1, "target": {"points": []}, "vectors": []},
    {"dimension": 1, "target": {"points": [{"datum": "1", "vec": ["1/2"]}]},
     "vectors": [{"points": [{"datum": "1", "vec": ["1"]}]}]},
    {"dimension": 1, "target": {"points": [{"datum": "2", "vec": ["1"]}, {"datum": "1", "vec": ["1"]}]},
     "vectors": [{"points": [{"datum": "1", "vec": ["1"]}]}]},
    {"format": "odlin/9", "dimension": 1},
    {"dimension": 1, "target": {"points": [{"datum": "1", "vec": [1.5]}]}, "vectors": []},
])
def test_input_errors(doc, files):
    assert call("solve", "--domain", "Q", "--input", files("i.json", doc))[0] == 4


def test_missing_file():
    assert call("solve", "--domain", "Q", "--input", "/nonexistent/file.json")[0] == 4


def test_instance_json_round_trip():
    inst = jsonio.matrix_instance_from_json(UP_DOWN)
    again = jsonio.matrix_instance_from_json(json.loads(jsonio.dumps(jsonio.instance_json(inst))))
    assert again == inst == MatrixInstance.of(((1, -1),), [((-1, 1),)])


def test_rationals_are_lowest_terms():
    assert jsonio.rat("6/4") == "3/2" and jsonio.rat(-2) == "-2"
    with pytest.raises(InputError):
        jsonio.parse_rat("1/0")


def test_console_script_entry_point(files):
    proc = subprocess.run([sys.executable, "-m", "odlin.cli", "hist", "profile", "--input", files("h.json", DEG2)],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout)["profile"][0][-1] == "0"
