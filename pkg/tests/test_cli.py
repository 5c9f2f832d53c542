import io
import json

import pytest

from hsint.cli import main


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out)
    return code, out.getvalue()


def test_classify_exit_codes():
    code, text = run("classify", "--p", "3", "--n", "3", "--q", "4")
    assert code == 0 and json.loads(text)["leaps"] == [3, 9]
    code, text = run("classify", "--p", "3", "--n", "9", "--q", "12")
    rep = json.loads(text)
    assert code == 2 and rep["power_reduce"]["leaps"] == [3, 9, 27] and "--tau" in rep["hint"]
    code, text = run("classify", "--p", "4", "--n", "3", "--q", "4")
    assert code == 1 and json.loads(text)["kind"] == "InvalidField"


def test_classify_with_tau():
    code, text = run("classify", "--p", "3", "--n", "3", "--q", "4", "--tau", "1")
    assert code == 0 and json.loads(text)["leaps"] == [3, 9, 27]


def test_leaps_command():
    code, text = run("leaps", "--p", "5", "--n", "3", "--q", "4", "--tau", "2")
    assert code == 0 and json.loads(text)["leaps"] == [25]
    code, text = run("leaps", "--p", "3", "--n", "9", "--q", "12")
    assert json.loads(text)["leaps"] == [3, 9, 27]


def test_integrate_and_verify(tmp_path, cold_cache):
    cert = tmp_path / "c.json"
    code, text = run("integrate", "--p", "3", "--h", "x^3-y^4", "--delta", "y*dx",
                     "--length", "8", "--mode", "exhaustive", "--out", str(cert))
    assert code == 0 and json.loads(text)["result"] == "certificate"
    code, text = run("integrate", "--p", "3", "--h", "x^3-y^4", "--delta", "y*dx",
                     "--length", "9", "--mode", "exhaustive")
    assert code == 3 and json.loads(text)["witness"]["failed_at"] == 9
    code, _ = run("integrate", "--p", "2", "--h", "x^2*y^2 - y^3", "--delta", "dx",
                  "--length", "4", "--mode", "exhaustive")
    assert code == 3
    code, text = run("integrate", "--p", "3", "--h", "x^3-y^4", "--delta", "dy", "--length", "3")
    assert code == 1 and json.loads(text)["residue"] == "2*y^3"
    code, text = run("integrate", "--p", "5", "--h", "x^5-y^6", "--delta", "y*dx",
                     "--length", "25", "--mode", "exhaustive", "--budget", "2")
    assert code == 4
    assert run("verify", "--certificate", str(cert))[0] == 0
    code, text = run("verify", "--certificate", str(cert), "--h", "x^3 - y^5")
    assert code == 5 and json.loads(text)["result"] == "rejected"


def test_verify_rejects_tampered_record(tmp_path):
    cert = tmp_path / "c.json"
    run("integrate", "--p", "3", "--h", "x^3-y^4", "--delta", "y*dx", "--length", "4",
        "--out", str(cert))
    rec = json.loads(cert.read_text())
    rec["images"][1] = [[3, "2"]]
    cert.write_text(json.dumps(rec))
    assert run("verify", "--certificate", str(cert))[0] == 5
    assert run("verify", "--certificate", str(tmp_path / "missing.json"))[0] == 1


def test_parse_error_offset():
    code, text = run("integrate", "--p", "3", "--h", "x^^2", "--delta", "dx", "--length", "2")
    assert code == 1 and json.loads(text)["offset"] == 2


def test_sweep_rows_and_determinism(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert run("sweep", "--p-list", "3", "--n-max", "3", "--q-max", "5", "--out", str(a))[0] == 0
    assert run("sweep", "--p-list", "3", "--n-max", "3", "--q-max", "5", "--out", str(b))[0] == 0
    assert a.read_bytes() == b.read_bytes()
    lines = a.read_text().splitlines()
    assert lines[0] == "p,n,q,tau,alpha,beta,gamma,s,m_rem,leaps,pieces,certs"
    rows = {tuple(l.split(",")[:4]): l for l in lines[1:]}
    assert len(rows) == 15
    assert rows[("3", "3", "4", "0")].split(",")[9] == "3;9"
    assert rows[("3", "3", "5", "0")].split(",")[9] == "3"


def test_sweep_empty_grid():
    code, text = run("sweep", "--p-list", "", "--n-max", "3", "--q-max", "3")
    assert code == 0 and text == "p,n,q,tau,alpha,beta,gamma,s,m_rem,leaps,pieces,certs\n"


def test_sweep_cross_check_small():
    code, text = run("sweep", "--p-list", "2,3", "--n-max", "4", "--q-max", "4", "--tau-max", "1",
                     "--verify-upto", "9")
    assert code == 0


def test_sweep_parallel_matches_serial(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    run("sweep", "--p-list", "2,3", "--n-max", "4", "--q-max", "4", "--out", str(a))
    run("sweep", "--p-list", "2,3", "--n-max", "4", "--q-max", "4", "--jobs", "2", "--out", str(b))
    assert a.read_bytes() == b.read_bytes()


@pytest.mark.parametrize("name", ["remark-2.7", "ex2-char2", "examples-2.2", "ex1"])
def test_examples_named(name):
    code, text = run("examples", "--name", name)
    assert code == 0 and "FAIL" not in text


def test_examples_all_and_unknown():
    code, text = run("examples")
    assert code == 0 and text.strip().endswith("all fixtures pass")
    assert run("examples", "--name", "nope")[0] == 1
