import io
import json
import subprocess
import sys
from fractions import Fraction

import pytest

from groupoidify.cli import run
from groupoidify.groupoid import one_object
from groupoidify.groups import cyclic_group
from groupoidify.jsonio import groupoid_to_json, over_to_json, span_to_json
from groupoidify.oscillator import ladder_spans, psi_n, two_colored
from groupoidify.span import tautological_over


def call(*argv):
    buf = io.StringIO()
    code = run(list(argv), stdout=buf)
    return code, buf.getvalue()


def call_json(*argv):
    code, text = call(*argv)
    return code, json.loads(text)


@pytest.fixture
def files(tmp_path):
    def write(name, doc):
        p = tmp_path / name
        p.write_text(json.dumps(doc))
        return str(p)
    return write


def test_card_of_table_and_shorthand(files):
    g = files("z3.json", groupoid_to_json(one_object(cyclic_group(3))))
    assert call_json("card", g) == (0, {"status": "ok", "payload": "1/3"})
    e = files("e3.json", {"finite_sets": 3})
    assert call_json("card", e) == (0, {"status": "ok", "payload": "8/3"})


def test_broken_groupoid_is_a_violation_with_witness(files):
    doc = groupoid_to_json(one_object(cyclic_group(2)))
    doc["compose"] = [[g, f, 1] for g, f, _ in doc["compose"]]
    code, out = call_json("card", files("bad.json", doc))
    assert code == 1
    assert out["status"] == "violation" and out["where"] == "groupoid"
    assert out["witness"]["violations"]


def test_unusable_input_is_an_error(tmp_path, files):
    code, out = call_json("card", str(tmp_path / "missing.json"))
    assert code == 2 and out["status"] == "error"
    p = tmp_path / "garbage.json"
    p.write_text("{not json")
    assert call_json("card", str(p))[0] == 2
    assert call_json("card", files("x.json", {"objects": [0]}))[0] == 2
    assert call_json("matrix", files("y.json", {"apex": {}}))[0] == 2


def test_bad_arguments_exit_2():
    assert call("frobnicate")[0] == 2


def test_vector_and_inner(files):
    N = 4
    v = files("psi2.json", over_to_json(psi_n(2, N)))
    code, out = call_json("vector", v)
    assert code == 0
    assert out["payload"]["entries"] == ["0/1", "0/1", "1/2", "0/1", "0/1"]
    assert call_json("inner", v, v)[1]["payload"] == "1/2"


def test_matrix_json_and_csv(files):
    A, _ = ladder_spans(3)
    s = files("a.json", span_to_json(A))
    code, out = call_json("matrix", s)
    assert code == 0
    assert out["payload"]["entries"][0][1] == "1/1"
    assert out["payload"]["entries"][2][3] == "3/1"
    code, text = call("matrix", s, "--csv")
    assert code == 0 and text.splitlines()[0] == ",0,1,2,3"


def test_compose_output_feeds_back_in(tmp_path, files):
    A, As = ladder_spans(3)
    a, a_star = files("a.json", span_to_json(A)), files("as.json", span_to_json(As))
    out_path = str(tmp_path / "aas.json")
    code, _ = call("compose", a, a_star, "--json-out", out_path)
    assert code == 0
    code, out = call_json("matrix", out_path)
    diag = [out["payload"]["entries"][n][n] for n in range(4)]
    assert diag == ["1/1", "2/1", "3/1", "0/1"]


def test_genfun(files):
    v = files("two.json", over_to_json(two_colored(4)))
    code, out = call_json("genfun", v, "--max", "4")
    assert code == 0
    want = [Fraction(2 ** n, f) for n, f in enumerate([1, 1, 2, 6, 24])]
    assert [Fraction(c) for c in out["payload"]["coefficients"]] == want
    assert call_json("genfun", v, "--max", "9")[0] == 2
    z = files("z.json", over_to_json(tautological_over(one_object(cyclic_group(2)))))
    assert call_json("genfun", z, "--max", "0")[0] == 2


def test_timing_only_on_request(files):
    e = files("e.json", {"finite_sets": 2})
    assert "timing" not in call_json("card", e)[1]
    assert "timing" in call_json("card", e, "--timing")[1]


def test_cap_limits_pullbacks(files):
    A, As = ladder_spans(4)
    a, a_star = files("a.json", span_to_json(A)), files("as.json", span_to_json(As))
    code, out = call_json("compose", a, a_star, "--cap", "2")
    assert code == 2 and "ResourceLimitError" in out["message"]
    assert call_json("compose", a, a_star)[0] == 0


def test_osc_and_hecke_verify():
    code, out = call_json("osc", "verify", "--max-n", "4")
    assert code == 0 and out["payload"]["ok"]
    assert all(out["payload"]["normal_order"].values())
    assert all(f["agree"] for f in out["payload"]["feynman"])
    code, out = call_json("hecke", "verify", "--q", "2")
    assert code == 0 and out["payload"]["ok"] and out["payload"]["flags"] == 21
    assert call_json("hecke", "verify", "--q", "4")[0] == 2


def test_selftest():
    code, out = call_json("selftest", "--seed", "3", "--rounds", "4")
    assert code == 0
    assert out["payload"]["ok"] and out["payload"]["rounds"] == 4


def test_module_entry_point(files):
    e = files("e.json", {"finite_sets": 1})
    proc = subprocess.run([sys.executable, "-m", "groupoidify", "card", e],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["payload"] == "2/1"
