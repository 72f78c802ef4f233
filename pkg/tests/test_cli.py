import json
import subprocess
import sys

import pytest

from qr3.cli import main, run


def run_json(argv):
    report, _ = run(argv)
    return report.exit_code, report.to_dict()


def test_certify_rnc4_target_dim(tmp_path):
    out = tmp_path / "c.json"
    code, rep = run_json(["certify", "--curve", "rnc:4", "--field", "Q", "--seed", "0", "--out", str(out)])
    assert code == 0
    cert = json.loads(out.read_text())
    assert cert["target_dim"] == 6 and cert["ranks"] == [3] * 6
    assert rep["outcome"] == cert
    assert set(rep) == {"command", "field", "timings_ms", "outcome", "warnings", "exit_code"}


def test_verify_roundtrip_and_tampering(tmp_path):
    good = tmp_path / "good.json"
    assert main(["certify", "--curve", "elliptic:a=0,b=1,d=6", "--field", "Fp:13", "--out", str(good)]) == 0
    code, rep = run_json(["verify", "--cert", str(good)])
    assert code == 0 and rep["outcome"]["passed"]

    data = json.loads(good.read_text())
    data["quadrics"].pop()
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(data))
    code, rep = run_json(["verify", "--cert", str(bad)])
    assert code == 2
    assert rep["outcome"]["deficit"] == 1 and rep["outcome"]["failed_checks"] == ["span"]


def test_verify_ignores_claimed_ranks(tmp_path):
    path = tmp_path / "c.json"
    main(["certify", "--curve", "rnc:3", "--out", str(path)])
    data = json.loads(path.read_text())
    data["ranks"] = [1, 1, 1]
    path.write_text(json.dumps(data))
    code, rep = run_json(["verify", "--cert", str(path)])
    assert code == 0 and rep["outcome"]["ranks"] == [3, 3, 3]


@pytest.mark.parametrize(
    "argv",
    [
        ["certify", "--curve", "elliptic:a=0,b=1,d=4", "--field", "Fp:4"],
        ["certify", "--curve", "conic", "--field", "Q"],
        ["certify"],
        ["frobnicate"],
        ["verify", "--cert", "/nonexistent/cert.json"],
        ["certify", "--curve", "rnc:4", "--primes", "5,x"],
        ["oracle", "--curve", "rnc:3", "--field", "Q"],
    ],
)
def test_usage_errors_exit_one(argv, capsys):
    assert main(argv) == 1
    err = capsys.readouterr().err
    assert err.strip() and "Traceback" not in err


def test_malformed_certificate_exit_one(tmp_path):
    path = tmp_path / "junk.json"
    path.write_text('{"field": "Q"}')
    assert main(["verify", "--cert", str(path)]) == 1


def test_diagnostics_exit_two():
    code, rep = run_json(["certify", "--curve", "elliptic:a=1,b=1,d=4", "--field", "Fp:7"])
    assert code == 2 and rep["outcome"]["diagnostic"] == "InsufficientRationalRoots"
    code, rep = run_json(["oracle", "--curve", "elliptic:a=1,b=1,d=4", "--field", "Fp:7"])
    assert code == 2 and rep["outcome"]["spans"] is False


def test_prime_retry_loop():
    code, rep = run_json(["certify", "--curve", "elliptic:a=1,b=1,d=4", "--primes", "7,11"])
    assert code == 0 and rep["field"] == "Fp:11"
    assert any("Fp:7" in w for w in rep["warnings"])


def test_ideal_oracle_lemma_commands():
    code, rep = run_json(["ideal", "--curve", "rnc:3", "-d", "2"])
    assert code == 0 and rep["outcome"]["checksum"] == {"ambient_dim": 3, "dim": 3, "ranks": rep["outcome"]["checksum"]["ranks"]}
    code, rep = run_json(["ideal", "--curve", "nodal4", "-d", "3"])
    assert code == 0 and rep["outcome"]["generation"]["generated"]
    code, rep = run_json(["oracle", "--curve", "rnc:3", "--field", "Fp:3"])
    assert code == 0 and rep["outcome"]["histogram"] == {"3": 4, "4": 9}
    code, rep = run_json(["lemma22", "--curve", "rnc:5", "--points", "(1:0);(0:1)"])
    assert code == 0 and rep["outcome"]["passed"]


def test_determinism_via_subprocess(tmp_path):
    paths = [tmp_path / f"run{i}.json" for i in range(2)]
    for path in paths:
        subprocess.run(
            [sys.executable, "-m", "qr3", "certify", "--curve", "elliptic:a=0,b=1,d=5", "--field", "Fp:13", "--seed", "7", "--out", str(path)],
            check=True,
            capture_output=True,
        )
    assert paths[0].read_bytes() == paths[1].read_bytes()


def test_json_flag_prints_valid_json(capsys):
    assert main(["ideal", "--curve", "cusp4", "--json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["outcome"]["checksum"]["dim"] == 2


def test_paper_suite_small_field_override():
    code, rep = run_json(["paper-suite", "--field-override", "Fp:3"])
    rows = rep["outcome"]["rows"]
    assert code == 0 and len(rows) == 9
    assert {r["status"] for r in rows} <= {"pass", "expected-over-small-field"}
    assert any(r["status"] == "expected-over-small-field" for r in rows if r["criterion"] == 4)
