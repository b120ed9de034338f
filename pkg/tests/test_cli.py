import json
from pathlib import Path

from fcheaps.cli import main

DATA = Path(__file__).resolve().parent.parent / "data"
CAFF = "family:C_affine_odd(7)"
WORD = "s1s3s5s2s4s6s1s3s5s7"

def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err

def test_heap_info_text(capsys):
    code, out, _ = run(capsys, "heap-info", "--graph", CAFF, WORD)
    assert code == 0
    assert "(1,7) -> v4" in out and "(2,8) -> v4 + v5" in out and "(3,9) -> v5 + v6" in out
    assert "boundary vertices: {v4, v5, v6}" in out
    assert "effective boundary vertices: {v4}" in out
    assert "equivalence classes: {v4, v5, v6} (+7 singletons)" in out

def test_heap_info_json_and_dot(capsys, tmp_path):
    dot = tmp_path / "h.dot"
    code, out, _ = run(capsys, "heap-info", "--graph", CAFF, WORD, "--json", "--dot", str(dot))
    assert code == 0
    report = json.loads(out)
    assert report["edges"] == [[1, 7], [2, 8], [3, 9]] and report["kernel_dim"] == 0
    assert dot.read_text().startswith("digraph heap {")

def test_out_of_range_word(capsys):
    code, _, err = run(capsys, "heap-info", "--graph", "family:A_line(8)", "s1s9")
    assert code == 2 and "s9" in err and "out of range" in err

def test_bad_graph_file(capsys, tmp_path):
    path = tmp_path / "bad.graph"
    path.write_text("rank 3\nbond 1 2 3\nbond 2 x 4\n")
    code, _, err = run(capsys, "heap-info", "--graph", str(path), "s1")
    assert code == 2 and f"{path}:3:8" in err
    code, _, err = run(capsys, "heap-info", "--graph", str(tmp_path / "missing"), "s1")
    assert code == 2 and "cannot read" in err

def test_usage_errors(capsys):
    assert run(capsys, "verify", "--graph", "family:B4", "--max-len", "3", "--checks", "bogus")[0] == 2
    assert run(capsys, "verify", "--graph", "family:Q9", "--max-len", "3")[0] == 2
    assert run(capsys, "frobnicate")[0] == 2
    assert run(capsys, "--help")[0] == 0

def test_verify_report(capsys, tmp_path):
    out = tmp_path / "r.json"
    code, text, _ = run(capsys, "verify", "--graph", "family:B_line(3)", "--max-len", "6",
                        "--checks", "all", "--out", str(out))
    assert code == 0 and "violations" in text
    report = json.loads(out.read_text())
    assert report["total_violations"] == 0 and report["star_reducible"] is True

def test_verify_reconstruction_exit_codes(capsys):
    graph = str(DATA / "line_434333.graph")
    code, text, _ = run(capsys, "verify", "--graph", graph, "--max-len", "13")
    assert code == 0 and json.loads(text)["total_violations"] == 8
    code, _, _ = run(capsys, "verify", "--graph", graph, "--max-len", "13", "--star-reducible")
    assert code == 1

def test_lemma_invariants_command(capsys):
    code, text, _ = run(capsys, "lemma-invariants", "--graph", "family:A_line(3)", "--max-len", "5")
    assert code == 0 and json.loads(text)["command"] == "lemma-invariants"

def test_forbidden_scan_command(capsys):
    code, text, err = run(capsys, "forbidden-scan", "--graph", "family:F_line(4)", "--max-len", "8")
    assert code == 0 and json.loads(text)["matches"] == [] and err == ""
    code, _, err = run(capsys, "forbidden-scan", "--graph", "family:A_line(3)", "--max-len", "4")
    assert code == 0 and err.startswith("advisory:")

def test_cbasis_command(capsys):
    code, out, _ = run(capsys, "cbasis", "--graph", "family:A_line(2)", "s1", "--basis", "b")
    assert code == 0 and out.splitlines() == ["b[s1] =", "v^-1 * t[1]", "1 * t[s1]"]
    code, out, _ = run(capsys, "cbasis", "--graph", "family:B_line(3)", "s2s1s2s3", "--mu")
    assert code == 0 and out.startswith("c[s2s1s2s3] =")
    assert run(capsys, "cbasis", "--graph", "family:A_line(2)", "s1s2s1")[0] == 2

def test_dot_command(capsys, tmp_path):
    out = tmp_path / "x.dot"
    code, _, _ = run(capsys, "dot", "--graph", "family:A_line(3)", "s1s4", str(out))
    assert code == 2 and not out.exists()
    code, _, _ = run(capsys, "dot", "--graph", "family:A_line(3)", "s1s2s1", str(out))
    assert code == 0 and "v1 -> v2;" in out.read_text()
