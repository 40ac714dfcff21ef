from __future__ import annotations

import subprocess
import sys

import pytest

from nangle import sequences as S
from nangle import serialize as Z
from nangle.cli import main


def run(*args):
    return main([str(a) for a in args])


def corrupt(path, out):
    lines = open(path).read().splitlines()
    i = next(k for k, ln in enumerate(lines) if ln.startswith("block"))
    p = int(next(ln for ln in lines if ln.startswith("map")).split("=")[1])
    row = lines[i + 1].split(" ")
    row[0] = str((int(row[0]) + 1) % p)
    lines[i + 1] = " ".join(row)
    out.write_text("\n".join(lines) + "\n")


def test_gen_deterministic(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    assert run("gen", "--seed", 0, "--out", a) == 0
    assert run("gen", "--seed", 0, "--out", b) == 0
    assert a.read_bytes() == b.read_bytes()
    s = Z.load(str(a))
    assert S.is_exact(s) and Z.dumps(s) == a.read_text()


def test_gen_zero_pieces(tmp_path):
    out = tmp_path / "z"
    assert run("gen", "--pieces", 0, "--n", 5, "--out", out) == 0
    assert Z.load(str(out)) == S.zero_seq(5, 5)


def test_pipeline_gen_complete_cone(tmp_path):
    s, t, m, c = (tmp_path / k for k in "stmc")
    assert run("gen", "--seed", 1, "--n", 3, "--out", s) == 0
    assert run("gen", "--seed", 2, "--n", 3, "--out", t) == 0
    assert run("complete", "--in", s, "--target", t, "--out", m) == 0
    assert run("cone", "--in", m, "--out", c) == 0
    assert S.is_exact(Z.load(str(c)))
    assert run("check", "--in", c, "--out", tmp_path / "r") == 0


def test_rotate(tmp_path):
    s, r = tmp_path / "s", tmp_path / "r"
    run("gen", "--seed", 4, "--out", s)
    assert run("rotate", "--in", s, "--steps", -3, "--out", r) == 0
    assert Z.load(str(r)) == S.rotate(Z.load(str(s)), -3)


def test_octa_and_cluster(tmp_path):
    o, k = tmp_path / "o", tmp_path / "k"
    assert run("octa", "--n", 5, "--seed", 3, "--out", o) == 0
    bundle = Z.load(str(o))
    assert len(bundle["psis"]) == 5 and S.is_exact(bundle["gamma"])
    assert run("octa", "--in", o, "--out", tmp_path / "o2") == 0
    assert run("cluster4", "--seed", 2, "--out", k) == 0
    assert Z.load(str(k))["gamma"].shift == 2
    assert run("cluster4", "--in", k, "--out", tmp_path / "k2") == 0


def test_check_trials_zero(tmp_path, capsys):
    assert run("check", "--trials", 0, "--format", "lines") == 0
    out = capsys.readouterr().out
    assert "check=n1 trials=0 passes=0 failures=0" in out


def test_corrupted_fixture(tmp_path, capsys):
    good, bad = tmp_path / "good", tmp_path / "bad"
    run("gen", "--seed", 5, "--pieces", 3, "--out", good)
    corrupt(good, bad)
    capsys.readouterr()
    assert run("check", "--in", bad) == 1
    witness = Z.loads(capsys.readouterr().out)
    assert witness["sequence"] == Z.load(str(bad)) and "position" in witness


def test_cone_of_non_morphism_fails(tmp_path, capsys):
    s = S.trivial_seq(Z.loads("nangle 1\nobject 0:1\n"), 0, 3)
    from nangle import graded as G
    comps = (G.scale(2, G.identity(s.objects[0])),) + tuple(G.identity(x) for x in s.objects[1:])
    f = tmp_path / "m"
    Z.dump(S.SeqMorphism(s, s, comps), str(f))
    assert run("cone", "--in", f) == 1


@pytest.mark.parametrize("args", [
    ["gen", "--n", "2"],
    ["bogus"],
    ["gen", "--prime", "6"],
    ["rotate"],
    ["gen", "--degree-lo", "3", "--degree-hi", "1"],
])
def test_usage_errors(args):
    assert main(args) == 2


def test_parse_error(tmp_path):
    f = tmp_path / "junk"
    f.write_text("not a document\n")
    assert run("rotate", "--in", f) == 2
    assert run("rotate", "--in", tmp_path / "missing") == 2


def test_env_prime_and_flag_precedence(tmp_path, monkeypatch):
    monkeypatch.setenv("NANGLE_PRIME", "3")
    a, b = tmp_path / "a", tmp_path / "b"
    assert run("gen", "--out", a) == 0
    assert Z.load(str(a)).p == 3
    assert run("gen", "--prime", 7, "--out", b) == 0
    assert Z.load(str(b)).p == 7
    monkeypatch.setenv("NANGLE_PRIME", "x")
    assert run("gen") == 2


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "nangle.cli", "gen", "--pieces", "0", "--n", "3"],
                         capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout.startswith("nangle 1")
