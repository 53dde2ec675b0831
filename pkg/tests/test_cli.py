import json
import subprocess
import sys

import pytest

from mcsp_sos.cli import main, parse_bits, parse_tt


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_parse_helpers():
    assert parse_tt("0110", 2) == (0, 1, 1, 0)
    assert parse_tt("6", 2) == (0, 1, 1, 0)
    assert parse_tt("0x96", 3) == (1, 0, 0, 1, 0, 1, 1, 0)
    assert parse_bits("1,0,1") == (1, 0, 1)
    with pytest.raises(ValueError):
        parse_bits("102")


def test_dimacs_golden(capsys):
    code, out, _ = run(capsys, "gen-cnf", "--n", 1, "--s", 1, "--truthtable", "00")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "p cnf 21 50"
    assert len(lines) == 51


def test_gen_formula_json(capsys, tmp_path):
    f = tmp_path / "P.json"
    code, _, _ = run(capsys, "gen-formula", "--n", 2, "--s", 3, "--truthtable", "0110", "--out", f)
    assert code == 0
    d = json.loads(f.read_text())
    assert d["format"] == "polysystem" and d["meta"]["s"] == 3


def test_refute_and_verify(capsys, tmp_path):
    P, pi = tmp_path / "P.json", tmp_path / "pi.json"
    run(capsys, "gen-formula", "--n", 2, "--s", 1, "--truthtable", "6", "--out", P)
    code, _, err = run(capsys, "refute-upper", "--n", 2, "--s", 1, "--truthtable", "6", "--out", pi)
    assert code == 0 and "degree" in err
    code, out, _ = run(capsys, "verify", "--system", P, "--proof", pi, "--refutation")
    assert code == 0 and out.startswith("accepted")
    d = json.loads(pi.read_text())
    tag = sorted(d["multipliers"])[0]
    d["multipliers"][tag] = d["multipliers"][tag] + " + 1"
    pi.write_text(json.dumps(d))
    code, _, err = run(capsys, "verify", "--system", P, "--proof", pi)
    assert code == 1 and "rejected" in err


def test_refute_computable_function_fails(capsys):
    code, _, err = run(capsys, "refute-upper", "--n", 2, "--s", 1, "--truthtable", "0001")
    assert code == 1 and "FunctionComputable" in err


def test_restrict_and_check_plan(capsys, tmp_path):
    g, plan = tmp_path / "G.json", tmp_path / "plan.json"
    run(capsys, "gen-graph", "--n", 2, "--m", 3, "--k", 2, "--seed", 1, "--out", g)
    code, _, _ = run(capsys, "restrict", "--graph", g, "--truthtable", "0110", "--out", plan)
    assert code == 0
    code, out, _ = run(capsys, "check-plan", "--plan", plan)
    res = json.loads(out)
    assert code == 0 and res["m_independent"] and res["parity_outputs"] and res["natural"]
    d = json.loads(plan.read_text())
    key = next(k for k, v in d["rho"].items() if isinstance(v, int))
    d["rho"][key] = 1 - d["rho"][key]
    plan.write_text(json.dumps(d))
    code, _, _ = run(capsys, "check-plan", "--plan", plan)
    assert code == 1


def test_oracles(capsys, tmp_path):
    assert run(capsys, "oracle", "mcs", "--n", 2, "--truthtable", "0110")[1].strip() == "4"
    assert run(capsys, "oracle", "mcs", "--n", 2, "--truthtable", "0110", "--s-max", 3)[1].strip() == "> 3"
    g = tmp_path / "G.json"
    g.write_text(json.dumps({"n": 2, "m": 3, "k": 2, "adj": {"0": [1, 2], "1": [2, 3], "2": [1, 3], "3": [1, 2]}}))
    assert run(capsys, "oracle", "xorsat", "--graph", g, "--b", "0010")[1].strip() == "UNSAT"
    assert run(capsys, "oracle", "xorsat", "--graph", g, "--b", "0000")[1].startswith("SAT")


def test_certify_xor(capsys, tmp_path):
    g, out = tmp_path / "G.json", tmp_path / "E.json"
    g.write_text(json.dumps({"n": 1, "m": 4, "k": 2, "adj": {"0": [1, 2], "1": [3, 4]}}))
    code, _, _ = run(capsys, "certify-xor", "--graph", g, "--b", "11", "--degree", 1, "--out", out)
    assert code == 0 and json.loads(out.read_text())["valid"]


def test_usage_and_domain_errors(capsys):
    assert run(capsys, "no-such-command")[0] == 2
    assert run(capsys, "gen-formula", "--n", 2)[0] == 2
    code, _, err = run(capsys, "gen-graph", "--n", 3, "--m", 3, "--k", 2, "--r", 2, "--retries", 3)
    assert code == 1 and "CertificationFailed" in err
    assert run(capsys, "verify", "--system", "/nonexistent", "--proof", "/nonexistent")[0] == 1


def test_params_report(capsys):
    code, out, _ = run(capsys, "params-report", "--n", 4, "--s", 64)
    assert code == 0 and "n^3.000" in out


def test_pipeline_replay_is_deterministic(capsys, tmp_path):
    man = tmp_path / "manifest.json"
    man.write_text(json.dumps({"seed": 7, "steps": [
        ["gen-graph", "--n", "2", "--m", "3", "--k", "2", "--out", "{work}/G.json"],
        ["restrict", "--graph", "{work}/G.json", "--truthtable", "0110", "--out", "{work}/plan.json"],
        ["refute-upper", "--n", "2", "--s", "1", "--truthtable", "6", "--out", "{work}/pi.json"],
    ]}))
    digests = []
    for i in range(2):
        w = tmp_path / f"w{i}"
        code, out, _ = run(capsys, "pipeline", "--manifest", man, "--workdir", w)
        assert code == 0
        digests.append(json.loads(out)["outputs"])
    assert digests[0] == digests[1] and len(digests[0]) == 3


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "mcsp_sos", "oracle", "mcs", "--n", "2",
                        "--truthtable", "0001"], capture_output=True, text=True)
    assert r.returncode == 0 and r.stdout.strip() == "1"
