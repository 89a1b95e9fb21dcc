import json
import subprocess
import sys

import pytest

from cyldom.cli import dispatch
from cyldom.tropical import identity, read_matrix, write_matrix

HELP = [
    [],
    ["words"],
    ["matrix"],
    ["matrix", "build"],
    ["matrix", "pow"],
    ["matrix", "mul"],
    ["scan"],
    ["bound"],
    ["bound-table"],
    ["oracle"],
    ["oracle", "gamma"],
    ["oracle", "wasted"],
    ["oracle", "verify"],
    ["pattern"],
]


def run(capsys, *argv):
    code = dispatch(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.mark.parametrize("cmd", HELP, ids=lambda c: " ".join(c) or "top")
def test_help(capsys, cmd):
    code, out, _ = run(capsys, *cmd, "--help")
    assert code == 0
    assert "usage:" in out


def test_words(capsys):
    code, out, _ = run(capsys, "words", "--rows", "10")
    assert code == 0 and out == "alpha(10) = 8119\n"
    code, out, _ = run(capsys, "--format", "json", "words", "--rows", "2", "--list")
    assert json.loads(out) == {"rows": 2, "alpha": 7, "words": ["00", "01", "10", "11", "12", "21", "22"]}


def test_global_flags_after_command(capsys):
    code, out, _ = run(capsys, "words", "--rows", "3", "--format", "json", "--threads", "1")
    assert code == 0 and json.loads(out)["alpha"] == 17


def test_usage_errors_exit_one(capsys):
    code, _, err = run(capsys, "frobnicate")
    assert code == 1 and "usage:" in err
    code, _, _ = run(capsys, "words")
    assert code == 1
    code, _, _ = run(capsys, "--threads", "0", "words", "--rows", "2")
    assert code == 1


def test_domain_error_exits_one(capsys):
    assert run(capsys, "words", "--rows", "25")[0] == 0
    code, out, err = run(capsys, "words", "--rows", "25", "--list")
    assert code == 1 and out == "" and "20" in err
    code, _, err = run(capsys, "matrix", "build", "--rows", "14", "--out", "/dev/null")
    assert code == 1 and "MiB" in err
    code, _, _ = run(capsys, "pattern", "--m", "12", "--n", "11")
    assert code == 1


def test_io_errors_exit_two(capsys, tmp_path):
    code, _, _ = run(capsys, "matrix", "pow", "--in", str(tmp_path / "missing.tmx"), "--n", "2",
                     "--out", str(tmp_path / "x.tmx"))
    assert code == 2
    bad = tmp_path / "bad.tmx"
    bad.write_bytes(b"nope" * 20)
    code, _, err = run(capsys, "matrix", "mul", "--a", str(bad), "--b", str(bad), "--out", str(tmp_path / "c.tmx"))
    assert code == 2 and "magic" in err
    bad_csv = tmp_path / "bad.csv"
    bad_csv.write_text("n,L\n")
    code, _, _ = run(capsys, "bound", "--m", "20", "--n", "30", "--l-table", str(bad_csv))
    assert code == 2


def test_matrix_commands(capsys, tmp_path):
    a = tmp_path / "a.tmx"
    assert run(capsys, "matrix", "build", "--rows", "3", "--out", str(a))[0] == 0
    m = read_matrix(a)
    assert m.dim == 17 and m.r == 3 and m.power == 1
    assert run(capsys, "matrix", "pow", "--in", str(a), "--n", "5", "--out", str(tmp_path / "a5.tmx"))[0] == 0
    assert run(capsys, "matrix", "mul", "--a", str(a), "--b", str(tmp_path / "a5.tmx"),
               "--out", str(tmp_path / "a6.tmx"))[0] == 0
    assert run(capsys, "matrix", "pow", "--in", str(a), "--n", "6", "--out", str(tmp_path / "b6.tmx"))[0] == 0
    a6, b6 = read_matrix(tmp_path / "a6.tmx"), read_matrix(tmp_path / "b6.tmx")
    assert a6 == b6 and a6.power == b6.power == 6


def test_matrix_mul_dimension_mismatch(capsys, tmp_path):
    write_matrix(identity(2), tmp_path / "i2.tmx")
    write_matrix(identity(3), tmp_path / "i3.tmx")
    code, _, _ = run(capsys, "matrix", "mul", "--a", str(tmp_path / "i2.tmx"), "--b", str(tmp_path / "i3.tmx"),
                     "--out", str(tmp_path / "o.tmx"))
    assert code == 1


def test_scan_csv_and_json(capsys, tmp_path):
    out = tmp_path / "t.csv"
    code, stdout, err = run(capsys, "scan", "--rows", "2", "--max-n", "9", "--out", str(out))
    assert code == 0 and stdout == ""
    assert "n=9 L=" in err
    lines = out.read_text().splitlines()
    assert lines[0] == "# r=2 recurrence=none"
    assert lines[1] == "n,L,source"
    assert len(lines) == 2 + 7
    code, stdout, err = run(capsys, "--quiet", "--format", "json", "scan", "--rows", "2", "--max-n", "40",
                            "--max-period", "6")
    data = json.loads(stdout)
    assert err == ""
    assert data["recurrence"] == {"n0": 11, "shift": 1, "period": 4}
    assert len(data["values"]) == 38


def test_scan_checkpoint_and_resume(capsys, tmp_path):
    ck = tmp_path / "ck"
    code, first, _ = run(capsys, "scan", "--rows", "3", "--max-n", "12", "--checkpoint", str(ck),
                         "--checkpoint-every", "4")
    assert code == 0 and sorted(p.name for p in ck.glob("state_*")) == ["state_000008.json", "state_000012.json"]
    code, again, _ = run(capsys, "scan", "--rows", "3", "--max-n", "12", "--resume", str(ck))
    assert code == 0 and again == first
    code, _, _ = run(capsys, "scan", "--rows", "3", "--max-n", "12", "--resume", str(tmp_path / "none"))
    assert code == 2


def test_bound_json(capsys):
    code, out, _ = run(capsys, "bound", "--m", "20", "--n", "30")
    assert code == 0
    d = json.loads(out)
    assert list(d) == ["m", "n", "residue", "k", "lower_new", "lower_grid", "upper_construction",
                       "upper_grid", "known_gamma", "flags"]
    assert d["lower_new"] == 132 and d["known_gamma"] == 132


def test_bound_with_user_table(capsys, tmp_path):
    t = tmp_path / "l2.csv"
    run(capsys, "scan", "--rows", "2", "--max-n", "10", "--out", str(t))
    code, out, _ = run(capsys, "bound", "--m", "4", "--n", "8", "--l-table", str(t))
    assert code == 0 and json.loads(out)["lower_new"] >= 7
    code, _, _ = run(capsys, "bound", "--m", "3", "--n", "8", "--l-table", str(t))
    assert code == 1


def test_bound_table(capsys, tmp_path):
    out = tmp_path / "b.csv"
    code, _, _ = run(capsys, "bound-table", "--m-range", "20..22", "--n-range", "30..34", "--out", str(out))
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[0].split(",")[:5] == ["m", "n", "residue", "k", "lower_new"]
    assert len(lines) == 1 + 3 * 5
    assert run(capsys, "bound-table", "--m-range", "22..20", "--n-range", "30..34")[0] == 1


def test_oracle_commands(capsys):
    code, out, _ = run(capsys, "oracle", "gamma", "--m", "2", "--n", "4")
    assert code == 0 and out == "gamma(P_2 x C_4) = 2\n"
    code, out, _ = run(capsys, "--format", "json", "oracle", "wasted", "--rows", "2", "--cols", "4")
    assert json.loads(out)["wasted"] == 1
    code, out, _ = run(capsys, "oracle", "verify", "--rows", "2", "--cols", "4")
    assert code == 0
    assert out.splitlines() == ["PASS min_diagonal", "PASS nd_sum", "PASS walk_label", "PASS round_trip",
                                "PASS bijection"]
    assert run(capsys, "oracle", "gamma", "--m", "5", "--n", "5")[0] == 1


def test_pattern(capsys):
    code, out, _ = run(capsys, "pattern", "--m", "12", "--n", "10")
    lines = out.splitlines()
    assert code == 0 and lines[0] == "# 28 vertices, verified dominating"
    assert sum(line.count("#") for line in lines[1:]) == 28


@pytest.mark.parametrize(
    "argv",
    [
        ["bound-table", "--m-range", "20..24", "--n-range", "30..40"],
        ["--format", "json", "bound-table", "--m-range", "20..21", "--n-range", "30..31"],
        ["--quiet", "scan", "--rows", "4", "--max-n", "20"],
    ],
)
def test_output_is_deterministic(capsys, argv):
    first = run(capsys, *argv)[1]
    second = run(capsys, "--threads", "1", *argv)[1]
    assert first == second and first


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "cyldom", "words", "--rows", "2"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and proc.stdout == "alpha(2) = 7\n"
