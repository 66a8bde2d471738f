import json

from multisym.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_hamiltonian_json(capsys):
    code, out, _ = run(capsys, "hamiltonian", "ddw", "--format", "json")
    assert code == 0
    js = json.loads(out)
    assert js["text"].startswith("e ")


def test_hamiltonian_ld2(capsys):
    assert run(capsys, "hamiltonian", "ld2")[0] == 2
    code, out, _ = run(capsys, "hamiltonian", "ld2", "--sigma", "1")
    assert code == 0 and out.startswith("H = ")
    assert run(capsys, "hamiltonian", "ld2", "--sigma", "symbolic")[0] == 0
    code, _, err = run(capsys, "hamiltonian", "ld2", "--sigma", "2")
    assert code == 3 and "sigma" in err
    assert run(capsys, "hamiltonian", "ld2", "--sigma", "abc")[0] == 2


def test_usage_errors(capsys):
    assert run(capsys, "frobnicate")[0] == 2
    assert run(capsys)[0] == 2
    assert run(capsys, "classify", "bogus=1")[0] == 2
    assert run(capsys, "classify", "sigma")[0] == 2


def test_derive(capsys):
    code, out, _ = run(capsys, "derive", "maxwell-dirac", "--format", "json")
    js = json.loads(out)
    assert code == 0 and js["maxwell_recovered"] is True and len(js["relations"]) == 10
    code, out, _ = run(capsys, "derive", "ld2")
    assert code == 0 and out.count("\n[d(") >= 6


def test_classify(capsys):
    code, out, _ = run(capsys, "classify", "sigma=2", "Pi[A1,2]=1", "Pi[A2,1]=1", "--format", "json")
    assert code == 0 and json.loads(out)["stratum"] == "sigma=2"


def test_bracket_generic(capsys):
    code, out, _ = run(capsys, "bracket", "Q", "P", "--format", "json")
    js = json.loads(out)
    assert code == 0 and js["paths_agree"] and "phi2[1]*psi[0,1]" in js["text"].replace(" ", "")
    code, out, _ = run(capsys, "bracket", "P", "P", "--format", "json")
    assert json.loads(out)["text"] == "0"


def test_bracket_files(capsys, tmp_path):
    a = tmp_path / "a.json"
    b = tmp_path / "b.json"
    a.write_text(json.dumps({"phi": [1, 0, "1/2", 0]}))
    b.write_text(json.dumps({"psi": [[0, 1, 0, 0], [-1, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]]}))
    code, out, _ = run(capsys, "bracket", "Q", "P", "--coeffs-a", str(b), "--coeffs-b", str(a))
    assert code == 0 and out.startswith("{Q,P} = ")
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"psi": [[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]]}))
    code, _, err = run(capsys, "bracket", "Q", "P", "--coeffs-a", str(bad))
    assert code == 2 and "antisymmetric" in err
    assert run(capsys, "bracket", "P", "P", "--coeffs-a", str(tmp_path / "missing.json"))[0] == 2


def test_simulate(capsys, tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"dims": 6, "steps": 3, "snapshot_every": 1}))
    code, out, _ = run(capsys, "simulate", str(cfg), "--out", str(tmp_path / "o"), "--format", "json")
    assert code == 0 and json.loads(out)["snapshots"] == 4
    diag = json.loads((tmp_path / "o" / "diagnostics.json").read_text())
    assert diag["steps"] == 3 and len(diag["series"]) == 4
    assert (tmp_path / "o" / "snapshots.csv").exists()
    cfg.write_text(json.dumps({"dims": 8, "dt": 0.25, "steps": 300}))
    assert run(capsys, "simulate", str(cfg), "--out", str(tmp_path / "p"))[0] == 1
    cfg.write_text(json.dumps({"dims": [8]}))
    assert run(capsys, "simulate", str(cfg))[0] == 2
    cfg.write_text("{not json")
    assert run(capsys, "simulate", str(cfg))[0] == 2


def test_verify_obstruction_deterministic(capsys, tmp_path):
    outs = []
    for _ in range(2):
        code, out, _ = run(capsys, "verify", "obstruction", "--format", "json")
        assert code == 0
        outs.append(out)
    assert outs[0] == outs[1]
    js = json.loads(outs[0])
    assert js["passed"] and js["witness"]["drho1_X"] != js["witness"]["drho1_Xbar"]


def test_verify_symbolic_quick(capsys, tmp_path):
    dest = tmp_path / "v.txt"
    code, out, _ = run(capsys, "verify", "symbolic", "--quick", "--out", str(dest))
    assert code == 0 and out == ""
    assert "FAIL" not in dest.read_text() and dest.read_text().count("PASS") == 12
