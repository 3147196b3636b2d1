import subprocess
import sys

import pytest

from repshift.cli import EXIT_CAP, EXIT_INPUT, main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_build(capsys, tmp_path):
    dot, csv = tmp_path / "g.dot", tmp_path / "g.csv"
    code, out, _ = run(capsys, "build", "--knot", "5_2", "--group", "S4", "--dot", str(dot), "--csv", str(csv))
    assert code == 0
    assert "pruned: vertices 81, edges 105" in out
    assert dot.read_text().count("->") == 105
    assert len(csv.read_text().splitlines()) == 81


def test_analyze_machine(capsys):
    code, out, _ = run(capsys, "analyze", "--knot", "trefoil", "--group", "S3", "--max-r", "6", "--machine")
    assert code == 0
    kv = dict(line.split("=") for line in out.splitlines())
    assert kv["verdict"] == "FiniteShift"
    assert float(kv["entropy"]) == 0.0
    assert [kv[f"fix_r_{r}"] for r in range(1, 7)] == ["1", "3", "10", "3", "1", "18"]


def test_analyze_human(capsys):
    code, out, _ = run(capsys, "analyze", "--knot", "6_1", "--group", "S4", "--max-r", "3")
    assert code == 0
    assert "verdict UncountableShift" in out
    assert "entropy 0.462098120368" in out


def test_probe(capsys):
    code, out, _ = run(capsys, "probe", "--knot", "6_1", "--max-n", "4")
    assert code == 0
    assert "NONFIBERED certified by S4" in out
    code, out, _ = run(capsys, "probe", "--knot", "trefoil", "--max-n", "4")
    assert "no witness <= S4" in out


def test_alexander_and_catalog(capsys):
    assert run(capsys, "alexander", "--knot", "4_1")[1].strip() == "t^2 - 3t + 1"
    out = run(capsys, "catalog")[1]
    assert "5_2" in out and "2t^2 - 3t + 2" in out and "nonfibered" in out


def test_cayley_group(capsys, tmp_path):
    path = tmp_path / "z3.txt"
    path.write_text("order 3\nidentity 0\n0 1 2\n1 2 0\n2 0 1\n")
    code, out, _ = run(capsys, "build", "--knot", "trefoil", "--group", f"cayley:{path}")
    assert code == 0
    assert "unpruned: vertices 9, edges 9" in out


def test_user_knot_file(capsys, tmp_path):
    path = tmp_path / "k.knot"
    path.write_text("name loopy\nbase_rank 1\nu a\nv a\n")
    code, out, _ = run(capsys, "analyze", "--knot", str(path), "--group", "S3", "--max-r", "2", "--machine")
    assert code == 0 and "fix_r_2=6" in out


@pytest.mark.parametrize("argv", [
    ["build", "--knot", "7_4", "--group", "S3"],
    ["build", "--knot", "trefoil", "--group", "A5"],
    ["build", "--knot", "trefoil", "--group", "cayley:/no/such/file"],
])
def test_input_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == EXIT_INPUT
    assert err.startswith("repshift: error:")


def test_unknown_knot_lists_catalog(capsys):
    _, _, err = run(capsys, "build", "--knot", "7_4", "--group", "S3")
    assert "trefoil" in err and "figure-eight" in err


def test_edge_cap_exit(capsys):
    code, _, err = run(capsys, "build", "--knot", "trefoil", "--group", "S4", "--edge-cap", "10")
    assert code == EXIT_CAP
    assert "edge cap" in err


@pytest.mark.parametrize("argv", [
    ["analyze", "--knot", "trefoil", "--group", "S3", "--max-r", "0"],
    ["probe", "--knot", "trefoil", "--max-n", "9"],
    ["build", "--knot", "trefoil"],
])
def test_usage_errors(argv):
    with pytest.raises(SystemExit) as info:
        main(argv)
    assert info.value.code == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "repshift", "alexander", "--knot", "5_2"],
                          capture_output=True, text=True, check=True)
    assert proc.stdout.strip() == "2t^2 - 3t + 2"
