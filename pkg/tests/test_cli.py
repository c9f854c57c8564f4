"""Command line behaviour: frozen output lines, files, error paths."""

import csv
import io

import pytest

from feaslab import cli
from feaslab.cutelim import BLOWUP_COLUMNS


def run(capsys, *argv):
    rc = cli.main(list(argv))
    captured = capsys.readouterr()
    return rc, captured.out, captured.err


def test_gen_square_cut(capsys):
    rc, out, err = run(capsys, "gen", "square-cut", "3")
    assert rc == 0 and err == ""
    assert out == "F(256), lines=35, cuts=11, contractions=3\n"


def test_gen_group_power_options(capsys):
    rc, out, _ = run(
        capsys, "gen", "group-power", "3", "--mode", "linear",
        "--letter", "y", "--theory", "group:free:x,y",
    )
    assert rc == 0
    assert out == "F(y^3), lines=9, cuts=4, contractions=0\n"


def test_gen_emit_and_check_round_trip(tmp_path, capsys):
    f = tmp_path / "proof.json"
    rc, out, _ = run(capsys, "gen", "square-cut", "2", "--emit", str(f))
    assert rc == 0
    assert out.endswith(f"wrote {f}\n")
    rc, out, _ = run(capsys, "check", str(f), "--theory", "arith")
    assert rc == 0
    assert out.startswith("ok: |- F(")
    assert out.rstrip().endswith("lines=25")


def test_cutfree_generator(capsys):
    rc, out, _ = run(capsys, "cutfree", "square-cut", "3")
    assert rc == 0
    assert out == "lines 35 -> 45, ratio=1.28571, checked=ok\n"


def test_cutfree_file_round_trip(tmp_path, capsys):
    src = tmp_path / "in.json"
    dst = tmp_path / "out.json"
    run(capsys, "gen", "square-cut", "2", "--emit", str(src))
    rc, out, _ = run(
        capsys, "cutfree", "--in", str(src), "--theory", "arith", "--emit", str(dst)
    )
    assert rc == 0
    assert out.startswith("lines 25 -> 21, ratio=0.84, checked=ok\n")
    rc, out, _ = run(capsys, "check", str(dst), "--theory", "arith")
    assert rc == 0 and out.startswith("ok:")


def test_cutfree_needs_input(capsys):
    rc, _, err = run(capsys, "cutfree")
    assert rc == 1
    assert err.startswith("error:")
    rc, _, err = run(capsys, "cutfree", "--in", "whatever.json")
    assert rc == 1
    assert "--theory" in err


def test_flow_stats(capsys):
    rc, out, _ = run(capsys, "flow", "square-cut", "2")
    assert rc == 0
    assert out == "nodes=45 edges=48 components=1 cycles=4 bridges=22\n"


def test_flow_dot_output(tmp_path, capsys):
    dot = tmp_path / "g.dot"
    rc, out, _ = run(capsys, "flow", "unary", "2", "--dot", str(dot))
    assert rc == 0
    text = dot.read_text()
    assert text.startswith("graph flow {")
    assert "axiom-link" in text


def test_bench_csv(capsys):
    rc, out, _ = run(capsys, "bench", "square-cut", "0..3")
    assert rc == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == list(BLOWUP_COLUMNS)
    assert rows[1] == ["0", "5", "3", "0.6", "2", "0", "", "ok"]
    assert rows[4] == ["3", "35", "45", "1.28571", "11", "3", "", "ok"]


def test_bench_output_file_and_budget(tmp_path, capsys):
    f = tmp_path / "sweep.csv"
    rc, out, _ = run(
        capsys, "bench", "square-cut", "5", "--budget", "50", "-o", str(f)
    )
    assert rc == 0
    assert out == f"wrote {f}\n"
    rows = list(csv.reader(f.open()))
    assert rows[1][-1] == "budget-exceeded"
    assert rows[1][2] == ""  # no cut-free count


def test_bench_fragment_status(capsys):
    rc, out, _ = run(capsys, "bench", "matrix-power", "1")
    assert rc == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[1][-1] == "fragment-exceeded"


def test_orbit_iteration(capsys):
    rc, out, _ = run(capsys, "orbit", "--n", "3", "--gen", "2")
    assert rc == 0
    assert out.splitlines() == [
        "0 0",
        "1 1",
        "2 3/2",
        "3 8/5",
        "proof: F(21/13), lines=112, cuts=30, contractions=24",
    ]


def test_orbit_through_infinity(capsys):
    # the swap matrix sends 0 to inf and back
    rc, out, _ = run(capsys, "orbit", "--matrix", "(0 1; 1 0)", "--x", "0", "--n", "2")
    assert rc == 0
    assert out.splitlines() == ["0 0", "1 inf", "2 0"]


def test_oracle_with_enumeration(capsys):
    rc, out, _ = run(capsys, "oracle", "16", "--enum")
    assert rc == 0
    assert out == "min-lines F(16) = 11\nenumerated proof lines = 11 (match)\n"


def test_oracle_costs_and_distortion(capsys):
    rc, out, _ = run(capsys, "oracle", "16", "--costs", "1,1,0")
    assert rc == 0
    assert out == "min-lines F(16) = 10\n"
    rc, out, _ = run(capsys, "oracle", "--distortion", "--max-n", "2")
    assert rc == 0
    assert out.splitlines() == [
        "n proof_lines normal_form conjugated_length word_distance",
        "0 15 (2, 0) 3 2",
        "1 17 (4, 0) 5 4",
        "2 23 (16, 0) 9 8",
    ]


def test_torus_table(capsys):
    rc, out, _ = run(capsys, "torus", "--n", "5")
    assert rc == 0
    lines = out.splitlines()
    assert lines[0] == "matrix (2 1; 1 1)"
    assert lines[1] == "eigenvalues 2.618033988750 0.381966011250"
    assert lines[2] == "k norm ratio"
    norms = [int(l.split()[1]) for l in lines[3:]]
    assert norms == [2, 5, 13, 34, 89]
    lam = (3 + 5**0.5) / 2
    ratios = [float(l.split()[2]) for l in lines[3:]]
    for k, r in enumerate(ratios, start=1):
        assert r == pytest.approx(norms[k - 1] / lam**k, abs=1e-9)


def test_error_paths(capsys):
    rc, _, err = run(capsys, "gen", "geometric", "0")
    assert rc == 1
    assert err.startswith("error:")
    rc, _, err = run(capsys, "check", "no-such-file.json", "--theory", "arith")
    assert rc == 1
    assert err.startswith("error:")
    rc, _, err = run(capsys, "gen", "rational-orbit", "0", "--matrix", "(0 1; 1 0)")
    assert rc == 1
    assert "inf" in err


def test_node_budget_env(monkeypatch, capsys):
    monkeypatch.setenv("FEASLAB_NODE_BUDGET", "50")
    rc, _, err = run(capsys, "cutfree", "square-cut", "5")
    assert rc == 1
    assert "budget" in err
    monkeypatch.setenv("FEASLAB_NODE_BUDGET", "10000")
    rc, out, _ = run(capsys, "cutfree", "square-cut", "5")
    assert rc == 0
    assert out.startswith("lines 55 -> 189")
