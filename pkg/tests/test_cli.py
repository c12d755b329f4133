import io
import json

import pytest

from tropogw.cli import run


def call(*argv):
    buf = io.StringIO()
    code = run(list(argv), stdout=buf)
    return code, json.loads(buf.getvalue()) if buf.getvalue() else None


def write(tmp_path, payload):
    path = tmp_path / "q.json"
    path.write_text(json.dumps(payload))
    return str(path)


QUERY = {"polygon": {"c_r": [2], "c_l": [-1, 0], "d_r": [2], "d_l": [1, 1], "d_t": 1},
         "genus": 0, "x": [1, -5], "y": [-1]}


def test_invariant_preset():
    code, out = call("invariant", "--preset", "example-64", "--threads", "1")
    assert code == 0 and out["value"] == "64" and out["diagram_count"] == "8"


def test_invariant_from_file_with_diagrams(tmp_path):
    code, out = call("invariant", "--input", write(tmp_path, QUERY), "--emit-diagrams",
                     "--threads", "1")
    assert code == 0 and out["value"] == "64"
    assert len(out["diagrams"]) == 8 and out["structural_failures"] == "0"


def test_multiplicity_input(tmp_path):
    payload = dict(QUERY)
    del payload["x"], payload["y"]
    payload["multiplicities"] = {"alpha": "00001", "beta": "1", "alpha_tilde": "1",
                                 "beta_tilde": "0"}
    assert call("invariant", "--input", write(tmp_path, payload))[1]["value"] == "64"


def test_thread_count_does_not_change_output(tmp_path):
    path = write(tmp_path, dict(QUERY, connected=False))
    one = call("invariant", "--input", path, "--threads", "1")
    four = call("invariant", "--input", path, "--threads", "4")
    assert one == four and one[1]["value"] == "64"


def test_validation_errors(tmp_path, monkeypatch):
    bad = dict(QUERY, x=[1, -4])
    code, out = call("invariant", "--input", write(tmp_path, bad))
    assert code == 2 and out["error"]["type"] == "InfeasibleDegree"
    code, out = call("invariant", "--input", str(tmp_path / "missing.json"))
    assert code == 2
    monkeypatch.setenv("TROPOGW_MAX_MASS", "3")
    code, out = call("invariant", "--preset", "example-64")
    assert code == 2 and "TROPOGW_MAX_MASS" in out["error"]["message"]
    assert call("no-such-command")[0] == 2


def test_gamma():
    assert call("gamma", "--g", "1", "--w", "4")[1] == {"value": "34"}
    assert call("gamma", "--g", "1", "--w", "1", "--k", "2")[1]["value"] == "8"
    assert call("gamma", "--g", "1")[0] == 2


def test_chamber_and_fit_presets():
    code, out = call("chamber", "--preset", "sec33", "--chamber", "++-")
    assert code == 0 and out["label"] == "++-" and out["wall_count"] == "6"
    code, out = call("fit", "--preset", "sec33", "--chamber", "+-+", "--g", "0")
    assert code == 0 and out["passed"] and out["matches_table"]
    code, out = call("chamber", "--preset", "sec33", "--chamber", "00-")
    assert code == 2


def test_fock_check_and_reciprocity(tmp_path):
    code, out = call("fock-check", "--preset", "example-64")
    assert code == 0 and out["agree"] and out["matrix_element"] == "64"
    code, out = call("reciprocity", "--preset", "sec33", "--g", "1")
    assert code == 0 and out["passed"]
    system = {"n_vertices": 3, "edges": [[0, 2], [2, 1], [0, 1]], "divergence": [3, -3, 0],
              "internal": [0, 1]}
    code, out = call("reciprocity", "--input", write(tmp_path, system))
    assert code == 0 and out["passed"] and out["dimension"] == "1"


@pytest.mark.parametrize("name", ["example-64", "sec33", "hirzebruch-f2", "four-floor"])
def test_presets(name):
    code, out = call("preset", "--preset", name)
    assert code == 0 and out["name"] == name
    assert call("preset")[1]["presets"] == ["example-64", "sec33", "hirzebruch-f2", "four-floor"]
