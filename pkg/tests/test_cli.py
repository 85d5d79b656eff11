import json
import subprocess
import sys
from pathlib import Path


DATA = Path(__file__).parent / "data"


def run_cli(*argv, check=False):
    proc = subprocess.run([sys.executable, "-m", "pretzel_pi1", *argv],
                          capture_output=True, text=True)
    if check and proc.returncode != 0:
        raise AssertionError(f"exit {proc.returncode}: {proc.stderr}")
    return proc


def normalized_json(text):
    doc = json.loads(text)
    doc.pop("version", None)
    doc.pop("engine_version", None)
    return doc


def test_derive_json_golden():
    proc = run_cli("derive", "--s", "3", "--format", "json", check=True)
    expected = normalized_json(DATA.joinpath("derive_s3.json").read_text())
    assert normalized_json(proc.stdout) == expected
    doc = json.loads(proc.stdout)
    assert doc["relator"]["compact"] == "clcLCL^-3CLclcl^2"
    assert doc["replay"] == "PASS"


def test_gen_text_golden():
    proc = run_cli("gen", "--s", "3", "--stage", "wirtinger", check=True)
    assert proc.stdout == DATA.joinpath("gen_s3.txt").read_text()


def test_nlo_json_golden():
    proc = run_cli("nlo", "--s", "3", "--slope", "19/1", "--format", "json",
                   check=True)
    expected = normalized_json(DATA.joinpath("nlo_s3_19_1.json").read_text())
    assert normalized_json(proc.stdout) == expected


def test_gen_tunnel_stage():
    proc = run_cli("gen", "--s", "3", "--stage", "tunnel", check=True)
    assert "rel r_inf: f0 a^-1" in proc.stdout
    assert "rel r6: f1 f0 f^-1 a^-1" in proc.stdout


def test_stdout_is_exactly_one_json_document():
    proc = run_cli("derive", "--s", "4", "--format", "json", check=True)
    json.loads(proc.stdout)  # raises if more than one document


def test_verify_subcommands_exit_zero():
    assert run_cli("verify", "fact", "--s", "5").returncode == 0
    assert run_cli("verify", "lemma-k", "--slope", "39/2").returncode == 0
    assert run_cli("verify", "induction", "--s", "3").returncode == 0


def test_verify_trace_round_trip(tmp_path):
    trace_file = tmp_path / "trace.json"
    run_cli("derive", "--s", "3", "--emit-trace", str(trace_file), check=True)
    proc = run_cli("verify", "trace", str(trace_file), "--check-abelian")
    assert proc.returncode == 0

    # negative control: corrupt one move
    data = json.loads(trace_file.read_text())
    data["moves"][5]["via"] = "r1"
    bad_file = tmp_path / "bad.json"
    bad_file.write_text(json.dumps(data))
    proc = run_cli("verify", "trace", str(bad_file), "--format", "json")
    assert proc.returncode == 1
    assert json.loads(proc.stdout)["passed"] is False


def test_h1_output():
    proc = run_cli("h1", "--s", "3", "--slope", "39/2", check=True)
    assert proc.stdout.strip() == "39"
    proc = run_cli("h1", "--s", "4", "--slope", "23/1", "--format", "json",
                   check=True)
    assert json.loads(proc.stdout)["order"] == 23


def test_abelianize_file(tmp_path):
    target = tmp_path / "filled.txt"
    run_cli("surgery", "--s", "3", "--slope", "19/1", "--emit", str(target),
            check=True)
    proc = run_cli("abelianize", str(target))
    assert proc.returncode == 0
    assert proc.stdout.strip() == "19"
    missing = run_cli("abelianize", str(tmp_path / "nope.txt"))
    assert missing.returncode == 1


def test_surgery_rejects_bad_slope():
    proc = run_cli("surgery", "--s", "3", "--slope", "38/2")
    assert proc.returncode == 2
    assert "lowest terms" in proc.stderr


def test_nlo_exit_codes_and_cert_file(tmp_path):
    cert_file = tmp_path / "cert.json"
    proc = run_cli("nlo", "--s", "3", "--slope", "19/1", "--cert", str(cert_file))
    assert proc.returncode == 0
    saved = json.loads(cert_file.read_text())
    assert saved["verdict"] == "not_left_orderable"
    proc = run_cli("nlo", "--s", "3", "--slope", "17/1")
    assert proc.returncode == 3
    proc = run_cli("nlo", "--s", "3", "--slope", "18/1", "--format", "json")
    assert proc.returncode == 3
    assert json.loads(proc.stdout)["verdict"] == "inconclusive"


def test_nlo_depth_env(tmp_path, monkeypatch):
    proc = subprocess.run(
        [sys.executable, "-m", "pretzel_pi1", "nlo", "--s", "3", "--slope",
         "19/1", "--format", "json"],
        capture_output=True, text=True, env={"PRETZEL_PI1_DEPTH": "2", "PATH": "/usr/bin:/bin"})
    assert proc.returncode == 3
    assert "budget" in json.loads(proc.stdout)["reason"]


def test_parse_both_grammars():
    assert run_cli("parse", "c l C c L", check=True).stdout.strip() == "c"
    proc = run_cli("parse", "clcLCL^-3CLclcl^2", check=True)
    assert proc.stdout.strip() == "c l c l^-1 c^-1 l^-3 c^-1 l^-1 c l c l^2"
    assert run_cli("parse", "c^0").returncode == 2


def test_usage_errors_exit_two():
    assert run_cli("gen").returncode == 2
    assert run_cli("frobnicate").returncode == 2
    assert run_cli("gen", "--s", "2").returncode == 2
