import pytest

from crossfractal.cli import main
from crossfractal.setfile import read_set


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_generate_xk(tmp_path, capsys):
    path = tmp_path / "x.pts"
    code, _, err = run(capsys, "generate", "xk", "--d", "2", "--k", "3", "--out", str(path))
    assert code == 0
    assert len(read_set(path)) == 64
    assert err.startswith("# crossfractal ")


def test_verify_cross_on_xplus(tmp_path, capsys):
    path = tmp_path / "xplus.pts"
    assert run(capsys, "generate", "xplus", "--d", "2", "--radius", "64", "--out", str(path))[0] == 0
    code, out, err = run(capsys, "verify", "cross", "--in", str(path), "--radius", "32")
    assert code == 0
    assert "violations=0" in out and "violations=0" in err


def test_verify_harmonic_on_xk(tmp_path, capsys):
    path = tmp_path / "xk_d2_k2.pts"
    run(capsys, "generate", "xk", "--d", "2", "--k", "2", "--out", str(path))
    code, out, _ = run(capsys, "verify", "harmonic", "--in", str(path), "--radius", "8")
    assert code == 1
    lines = out.splitlines()
    assert "violations=4" in lines[0]
    assert sorted(lines[1:]) == sorted(["-4,0", "0,-4", "0,4", "4,0"])


def test_usage_errors(capsys):
    code, _, err = run(capsys, "generate", "xk", "--d", "2", "--k", "3", "--bogus")
    assert code == 2 and "usage" in err
    assert run(capsys, "frobnicate")[0] == 2
    assert run(capsys, "poly", "spow", "--d", "2")[0] == 2


def test_budget_errors(capsys):
    assert run(capsys, "generate", "xk", "--d", "4", "--k", "9", "--budget", "1000")[0] == 2
    assert run(capsys, "minweight", "--d", "2", "--radius", "4")[0] == 2
    assert run(capsys, "poly", "spow", "--d", "3", "--k", "6", "--budget", "10")[0] == 2


def test_poly_check_xk(capsys):
    code, out, _ = run(capsys, "poly", "check-xk", "--d", "2", "--k", "4")
    assert code == 0
    assert out == "check-xk d=2 k=4 xk_points=256 spow_minus_one_equal=true spow_equal=true\n"


def test_dimension_output(capsys):
    code, out, _ = run(capsys, "dimension", "--generator", "xinf", "--d", "1", "--radii", "8,16,32,64")
    assert code == 0
    assert out.splitlines()[0] == "radius,count"
    assert out.splitlines()[-1] == "# slope=1.000000 residual=0.000000"


def test_minweight_output(capsys):
    code, out, _ = run(capsys, "minweight", "--d", "1", "--radius", "2")
    assert code == 0
    assert out.splitlines()[0] == "n=1 r=2 relaxed_min_weight=3"
    assert out.splitlines()[-3:] == ["-2", "0", "2"]


def test_walk_subcommands(capsys):
    code, out, _ = run(capsys, "walk", "lemma42", "--d", "2", "--radius", "256", "--trials", "10", "--max-level", "4")
    assert code == 0 and out.rstrip().endswith("failures=0 seed=0")
    code, out, _ = run(capsys, "walk", "census", "--d", "1", "--radius", "256", "--n", "3")
    assert code == 0 and "opposing_start_collisions=0" in out


def test_walk_breach_exit_code(tmp_path, capsys):
    path = tmp_path / "lonely.pts"
    path.write_text("# d=2 n=2\n0,0\n0,1\n")
    code, _, err = run(capsys, "walk", "lemma42", "--in", str(path), "--radius", "8", "--trials", "1")
    assert code == 1 and "violation" in err


SUBCOMMANDS = [
    ["generate", "xk", "--d", "2", "--k", "5"],
    ["generate", "xinf", "--d", "3", "--radius", "16"],
    ["generate", "xplus", "--d", "2", "--radius", "32"],
    ["poly", "spow", "--d", "2", "--k", "4"],
    ["poly", "check-xk", "--d", "3", "--k", "3"],
    ["dimension", "--generator", "xinf", "--d", "2", "--radii", "8,16,32,64"],
    ["dimension", "--generator", "xk", "--d", "2", "--radii", "4,8,16"],
    ["minweight", "--d", "2", "--radius", "3"],
    ["walk", "lemma42", "--d", "2", "--radius", "256", "--trials", "25", "--max-level", "4", "--seed", "11"],
    ["walk", "census", "--d", "2", "--radius", "512", "--n", "3"],
    ["walk", "census", "--d", "3", "--radius", "256", "--n", "3", "--k", "2", "--budget", "30", "--seed", "4"],
]


@pytest.mark.parametrize("argv", SUBCOMMANDS, ids=lambda a: "-".join(a[:2]))
def test_outputs_identical_across_thread_counts(argv, tmp_path, capsys):
    outputs = []
    for threads in ("1", "8"):
        path = tmp_path / f"out{threads}.txt"
        code, stdout, _ = run(capsys, *argv, "--threads", threads, "--out", str(path))
        outputs.append((code, stdout, path.read_bytes()))
    assert outputs[0] == outputs[1]


@pytest.mark.parametrize("predicate", ["harmonic", "cross", "supportive", "harmonic2"])
def test_verify_identical_across_thread_counts(predicate, tmp_path, capsys):
    src = tmp_path / "x.pts"
    run(capsys, "generate", "xinf", "--d", "2", "--radius", "64", "--out", str(src))
    outs = []
    for threads in ("1", "8"):
        code, stdout, _ = run(capsys, "verify", predicate, "--in", str(src), "--radius", "40", "--threads", threads)
        outs.append((code, stdout))
    assert outs[0] == outs[1]
