import json
import subprocess
import sys

import pytest

from superspecial.cli import EXIT_BOTTOM, EXIT_BUDGET, EXIT_INVALID, EXIT_OK, EXIT_VERIFY_FAILED, main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_exit_codes_distinct():
    assert len({EXIT_OK, EXIT_VERIFY_FAILED, EXIT_INVALID, EXIT_BOTTOM, EXIT_BUDGET}) == 5 and EXIT_OK == 0


def test_table(capsys):
    code, out, _ = run(capsys, "table", "--gmax", "6")
    rows = json.loads(out)
    assert code == 0 and len(rows) == 6
    assert rows[1]["alg1_classical"] == 1 and rows[5]["pollard"] == 10.5 and rows[0]["alg1_classical"] is None


def test_hunt(capsys):
    code, out, _ = run(capsys, "hunt", "--p", "127", "--seed", "1", "--workers", "1")
    rep = json.loads(out)
    assert code == 0 and rep["steps_done"] > 0 and rep["product_node"].startswith("P:")
    code2, out2, _ = run(capsys, "hunt", "--p", "127", "--seed", "1", "--workers", "1")
    assert json.loads(out2) == rep


def test_hunt_budget_exit(capsys):
    code, _, err = run(capsys, "hunt", "--p", "127", "--seed", "1", "--max-steps", "3")
    assert code == EXIT_BUDGET and "budget" in err


def test_census_and_guard(capsys):
    code, out, _ = run(capsys, "census", "--p", "11")
    res = json.loads(out)
    assert code == 0 and res["mass"] == "61/288"
    code, _, _ = run(capsys, "census", "--p", "53")
    assert code == EXIT_BUDGET


def test_invalid_prime():
    with pytest.raises(SystemExit) as ei:
        main(["hunt", "--p", "12"])
    assert ei.value.code == EXIT_INVALID
    with pytest.raises(SystemExit) as ei:
        main(["hunt", "--p", "127", "--workers", "0"])
    assert ei.value.code == EXIT_INVALID


def test_attack_verify_and_tamper(capsys, tmp_path):
    cert = tmp_path / "cert.json"
    code, out, _ = run(capsys, "attack", "--p", "127", "--seed-a", "a", "--seed-b", "b", "--out", str(cert))
    assert code == 0 and json.loads(out)["length"] > 0
    code, out, _ = run(capsys, "verify", "--cert", str(cert))
    assert code == 0 and json.loads(out)["ok"]
    doc = json.loads(cert.read_text())
    i = next(k for k, s in enumerate(doc["steps"]) if s["kind"] == "product_pair")
    doc["steps"][i]["codomain"]["pair"] = doc["steps"][i]["domain"]["pair"]
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(doc))
    code, out, err = run(capsys, "verify", "--cert", str(bad))
    assert code == EXIT_VERIFY_FAILED and f"step {i}" in err
    trunc = tmp_path / "trunc.json"
    trunc.write_text(cert.read_text()[:100])
    code, _, err = run(capsys, "verify", "--cert", str(trunc))
    assert code == EXIT_INVALID
    code, _, _ = run(capsys, "verify", "--cert", str(tmp_path / "missing.json"))
    assert code == EXIT_INVALID


def test_hash(capsys):
    code, out, _ = run(capsys, "hash", "cgl", "--p", "127", "--msg", "a5")
    res = json.loads(out)
    assert code == 0 and res["bits"] == 8
    assert json.loads(run(capsys, "hash", "cgl", "--p", "127", "--msg", "a5")[1]) == res
    code, out, _ = run(capsys, "hash", "cds", "--p", "127", "--msg", "1")
    res = json.loads(out)
    assert code in (EXIT_OK, EXIT_BOTTOM) and res["digits"] == 2
    code, _, _ = run(capsys, "hash", "cgl", "--p", "127", "--msg", "zz")
    assert code == EXIT_INVALID


def test_cds_failure_exit(capsys):
    # scan short messages at p=11 until one walks into a product
    for m in range(256):
        code, out, _ = run(capsys, "hash", "cds", "--p", "11", "--msg", f"{m:02x}")
        if code == EXIT_BOTTOM:
            assert json.loads(out)["failed"]
            return
    pytest.fail("no failing CDS message found")


def test_cycles_and_mix(capsys):
    code, out, _ = run(capsys, "cycles", "--p", "127", "--seed", "7", "--limit", "2")
    res = json.loads(out)
    assert code == 0 and res["count"] > 0 and len(res["cycles"]) == 2
    code, out, err = run(capsys, "mix", "--p", "11", "--len", "5", "--trials", "200")
    assert code == 0 and json.loads(out)["walk_len"] == 5


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "superspecial", "table", "--gmax", "2"], capture_output=True, text=True)
    assert r.returncode == 0 and len(json.loads(r.stdout)) == 2
