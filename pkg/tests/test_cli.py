import csv
import io
import json

import pytest

from hgc.cli import main

L26 = {"m": 2, "n": 6, "flavor": "A", "internal": 0,
       "hairs": [{"dec": "1"}, {"dec": "w"}], "edges": [["h1", "h2"]]}
TOMEGA36 = {"m": 3, "n": 6, "flavor": "A", "internal": 1,
            "hairs": [{"dec": "w"}] * 3, "edges": [["v1", "h1"], ["v1", "h2"], ["v1", "h3"]]}


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def write(tmp_path, name, obj):
    f = tmp_path / name
    f.write_text(json.dumps(obj))
    return str(f)


def test_d2check_passes(capsys):
    code, out, _ = run(capsys, "d2check", "--m", "2", "--n", "5", "--flavor", "A", "--max-v", "3", "--max-h", "3")
    assert code == 0
    rep = json.loads(out)
    assert rep["failures"] == [] and rep["window"]["max_internal"] == 3


def test_window_shorthand(capsys):
    code, out, _ = run(capsys, "d2check", "--m", "2", "--n", "5", "--window", "V=2,H=3")
    assert code == 0 and json.loads(out)["window"]["max_hairs"] == 3


def test_mc_check_named(capsys):
    code, out, _ = run(capsys, "mc", "check", "--name", "Tomega", "--m", "3", "--n", "6")
    assert code == 0 and json.loads(out)["maurer_cartan"] is True


def test_diff_of_line_is_d(capsys, tmp_path):
    code, out, _ = run(capsys, "diff", "--in", write(tmp_path, "l.json", L26))
    assert code == 0
    terms = json.loads(out)["terms"]
    assert len(terms) == 1 and terms[0]["graph"]["internal"] == 1


def test_twist(capsys, tmp_path):
    pi = write(tmp_path, "pi.json", TOMEGA36)
    x = write(tmp_path, "x.json", {**L26, "m": 3, "n": 6})
    code, out, _ = run(capsys, "twist", "--pi", pi, "--in", x)
    assert code == 0 and len(json.loads(out)["terms"]) == 2


def test_twist_by_non_mc_element_fails(capsys, tmp_path):
    # the omega line has degree 1 at (2,6), so it cannot be a Maurer-Cartan element
    pi = write(tmp_path, "pi.json", {**L26, "hairs": [{"dec": "w"}, {"dec": "w"}]})
    x = write(tmp_path, "x.json", {**L26, "m": 2, "n": 6})
    code, _, err = run(capsys, "twist", "--pi", pi, "--in", x)
    assert code == 2 and err


def test_enumerate_csv_and_json(capsys):
    code, out, _ = run(capsys, "enumerate", "--m", "2", "--n", "5", "--max-v", "1", "--max-h", "3",
                       "--format", "csv")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert rows and set(rows[0]) == {"degree", "count", "complete", "graphs"}
    code, out, _ = run(capsys, "enumerate", "--m", "2", "--n", "5", "--max-v", "1", "--max-h", "3")
    assert sum(s["count"] for s in json.loads(out)["slices"]) == sum(int(r["count"]) for r in rows)


def test_enumerate_deterministic(capsys):
    args = ("enumerate", "--m", "3", "--n", "7", "--max-v", "2", "--max-h", "3")
    _, a, _ = run(capsys, *args)
    _, b, _ = run(capsys, *args)
    assert a == b


def test_homology_and_cone(capsys):
    code, out, _ = run(capsys, "homology", "--m", "3", "--n", "7", "--flavor", "Abar", "--sector", "Trees",
                       "--degree", "0", "--format", "json")
    assert code == 0
    rep = json.loads(out)
    assert rep["reports"][0]["betti"] == 1 and rep["uncertified_degrees"] == []
    code, out, _ = run(capsys, "cone", "--m", "2", "--n", "5", "--degree", "2..3", "--format", "csv")
    assert code == 0
    assert [int(r["betti"]) for r in csv.DictReader(io.StringIO(out))] == [1, 1]


def test_phi_verify_and_apply(capsys, tmp_path):
    code, out, _ = run(capsys, "phi", "verify", "--m", "3", "--n", "6", "--max-v", "2", "--max-h", "3")
    assert code == 0 and json.loads(out)["passed"]
    g = {"m": 3, "n": 6, "flavor": "Aprime", "internal": 1,
         "hairs": [{"dec": "e"}, {"dec": "w"}, {"dec": "w"}], "edges": [["v1", "h1"], ["v1", "h2"], ["v1", "h3"]]}
    code, out, _ = run(capsys, "phi", "apply", "--in", write(tmp_path, "g.json", g))
    assert code == 0 and json.loads(out)["flavor"] == "A"


def test_linf_verify(capsys):
    code, out, _ = run(capsys, "linf", "verify", "--arity", "3", "--m", "2", "--n", "5",
                       "--window", "V=1,H=3", "--seed", "4", "--samples", "5")
    assert code == 0 and json.loads(out)["checked"] == 5


def test_parity_table(capsys):
    code, out, _ = run(capsys, "parity-table", "--grid", "small")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 24 and all(r["match"] == "True" for r in rows)


def test_verify_all_subset(capsys):
    code, out, err = run(capsys, "verify-all", "--grid", "small", "--only", "3,4")
    assert code == 0 and "[PASS]" in err
    assert [r["criterion"] for r in json.loads(out)["results"]] == [3, 4]


def test_config_file_supplies_defaults(capsys, tmp_path):
    cfg = write(tmp_path, "cfg.json", {"m": 3, "n": 6})
    code, out, _ = run(capsys, "--config", cfg, "mc", "check", "--name", "Tomega")
    assert code == 0
    code, out, _ = run(capsys, "--config", cfg, "mc", "check", "--name", "Tomega", "--n", "7")
    assert json.loads(out)["n"] == 7


def test_output_file(capsys, tmp_path):
    target = tmp_path / "out.json"
    code, out, _ = run(capsys, "mc", "check", "--name", "Lomega", "--m", "3", "--n", "7", "-o", str(target))
    assert code == 0 and out == "" and json.loads(target.read_text())["maurer_cartan"]


@pytest.mark.parametrize("argv", [
    ["bogus"],
    ["d2check", "--m", "2", "--n", "4", "--max-v", "2", "--max-h", "2"],
    ["d2check", "--m", "2", "--n", "5"],
    ["homology", "--m", "2", "--n", "5", "--degree", "x..y"],
    ["diff", "--in", "/nonexistent.json"],
    ["mc", "check", "--m", "3", "--n", "6"],
    ["parity-table", "--grid", "2,4"],
    ["verify-all", "--only", "99"],
    ["--config", "/nonexistent.json", "parity-table"],
])
def test_usage_errors_exit_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and err


def test_invalid_graph_is_usage_error(capsys, tmp_path):
    bad = {**L26, "edges": [["h1", "v7"]]}
    code, _, err = run(capsys, "diff", "--in", write(tmp_path, "bad.json", bad))
    assert code == 2 and "error" in err


def test_diff_kinds_add_up(capsys, tmp_path):
    from hgc import FormalSum

    f = write(tmp_path, "l.json", L26)
    parts = {}
    for kind in ("split", "join", "full"):
        code, out, _ = run(capsys, "diff", "--kind", kind, "--in", f)
        assert code == 0
        parts[kind] = FormalSum.from_obj(json.loads(out))
    assert parts["split"] + parts["join"] == parts["full"]
    code, _, _ = run(capsys, "diff", "--kind", "prime", "--in", f)
    assert code == 2
