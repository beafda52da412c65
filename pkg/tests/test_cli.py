import json
import shutil
import subprocess
import sys

import numpy as np
import pytest

from fuchs.cli import main
from fuchs.quantize import quantize_direct
from fuchs.serialize import kernel_from_json, symbol_from_json


def _run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_verify_all_passes(capsys):
    code, out, _ = _run(capsys, "verify", "--suite", "all")
    doc = json.loads(out)
    assert code == 0 and doc["summary"]["pass"]
    assert {r["suite"] for r in doc["results"]} >= {"padic", "harmonic", "repn", "quantize", "star", "calculus"}


def test_verify_is_deterministic(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert _run(capsys, "verify", "--suite", "quantize", "--seed", "3", "--out", str(a))[0] == 0
    assert _run(capsys, "verify", "--suite", "quantize", "--seed", "3", "--out", str(b))[0] == 0
    assert a.read_bytes() == b.read_bytes()


def test_verify_csv(capsys):
    code, out, _ = _run(capsys, "verify", "--suite", "padic", "--format", "csv")
    lines = out.splitlines()
    assert code == 0
    assert lines[0].split(",")[:4] == ["suite", "check", "p", "n"]
    assert len(lines) > 1


@pytest.mark.parametrize("argv", [
    ["verify", "--prime", "2"],
    ["verify", "--prime", "9"],
    ["verify", "--n", "0"],
    ["verify", "--m", "2", "--N", "2", "--strict"],
    ["verify", "--theta-digits", "0,1"],
])
def test_verify_rejects_bad_config(capsys, argv):
    code, _, err = _run(capsys, *argv)
    assert code == 2 and "error" in err


def test_strict_refinement_is_logged(capsys):
    code, out, _ = _run(capsys, "verify", "--suite", "calculus", "--m", "2", "--N", "2")
    assert code == 0
    assert any("refined" in n for n in json.loads(out)["notes"])


def test_timings_flag(capsys):
    _, out, _ = _run(capsys, "verify", "--suite", "padic")
    assert all(r["runtime_ms"] is None for r in json.loads(out)["results"])
    _, out, _ = _run(capsys, "verify", "--suite", "padic", "--timings")
    assert all(isinstance(r["runtime_ms"], (int, float)) for r in json.loads(out)["results"])


def _symbol_file(capsys, path, seed, m=3, N=2):
    assert _run(capsys, "random-symbol", "--seed", str(seed), "--m", str(m), "--N", str(N), "--out", str(path))[0] == 0
    return symbol_from_json(json.loads(path.read_text()))


def test_quantize_round_trip(capsys, tmp_path):
    f = _symbol_file(capsys, tmp_path / "f.json", 1)
    assert _run(capsys, "quantize", str(tmp_path / "f.json"), "--out", str(tmp_path / "k.json"))[0] == 0
    doc = json.loads((tmp_path / "k.json").read_text())
    assert doc["provenance"]["command"] == "quantize"
    A = kernel_from_json(doc)
    assert A.max_diff(quantize_direct(f)) < 1e-12
    assert _run(capsys, "reconstruct", str(tmp_path / "k.json"), "--out", str(tmp_path / "g.json"))[0] == 0
    g = symbol_from_json(json.loads((tmp_path / "g.json").read_text()))
    assert g.max_diff(f.refine(g.m, g.N)) < 1e-9


def test_star_with_one_returns_input(capsys, tmp_path):
    f = _symbol_file(capsys, tmp_path / "f.json", 2, m=3, N=3)
    one = f.like(np.ones_like(f.values))
    from fuchs.serialize import dump, symbol_to_json
    dump(symbol_to_json(one), str(tmp_path / "one.json"))
    assert _run(capsys, "star", str(tmp_path / "one.json"), str(tmp_path / "f.json"),
                "--out", str(tmp_path / "o.json"))[0] == 0
    out = symbol_from_json(json.loads((tmp_path / "o.json").read_text()))
    assert out.max_diff(f) < 1e-10


def test_star_requantizes_to_product(capsys, tmp_path):
    f1 = _symbol_file(capsys, tmp_path / "a.json", 3)
    f2 = _symbol_file(capsys, tmp_path / "b.json", 4)
    _, out, _ = _run(capsys, "star", str(tmp_path / "a.json"), str(tmp_path / "b.json"))
    h = symbol_from_json(json.loads(out))
    assert quantize_direct(h).max_diff(quantize_direct(f1) @ quantize_direct(f2)) < 1e-10


def test_star_strict_rejects_unclosed(capsys, tmp_path):
    _symbol_file(capsys, tmp_path / "a.json", 3, m=2, N=2)
    code, _, err = _run(capsys, "star", str(tmp_path / "a.json"), str(tmp_path / "a.json"), "--strict")
    assert code == 2 and "m >= N + n" in err


def test_bad_inputs_exit_2(capsys, tmp_path):
    assert _run(capsys, "quantize", str(tmp_path / "missing.json"))[0] == 2
    (tmp_path / "bad.json").write_text("{not json")
    assert _run(capsys, "quantize", str(tmp_path / "bad.json"))[0] == 2
    (tmp_path / "k.json").write_text(json.dumps({"kind": "kernel", "p": 3, "n": 1, "M": 2}))
    assert _run(capsys, "reconstruct", str(tmp_path / "k.json"))[0] == 2
    f = _symbol_file(capsys, tmp_path / "f.json", 1)
    doc = json.loads((tmp_path / "f.json").read_text())
    doc["values"] = doc["values"][:-1]
    (tmp_path / "short.json").write_text(json.dumps(doc))
    assert _run(capsys, "quantize", str(tmp_path / "short.json"))[0] == 2
    assert f is not None


def test_theta_mismatch_exit_2(capsys, tmp_path):
    _symbol_file(capsys, tmp_path / "a.json", 1)
    assert _run(capsys, "random-symbol", "--theta-digits", "2", "--out", str(tmp_path / "b.json"))[0] == 0
    code, _, err = _run(capsys, "star", str(tmp_path / "a.json"), str(tmp_path / "b.json"))
    assert code == 2 and "theta" in err


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "fuchs", "verify", "--suite", "padic"], capture_output=True, text=True)
    assert r.returncode == 0 and json.loads(r.stdout)["summary"]["pass"]


@pytest.mark.skipif(shutil.which("fuchs") is None, reason="console script not on PATH")
def test_console_script():
    r = subprocess.run(["fuchs", "--help"], capture_output=True, text=True)
    assert r.returncode == 0 and "verify" in r.stdout
