import csv
import json

import pytest

from evochain.cli import EXIT_CONFIG, EXIT_DOMAIN, EXIT_OK, EXIT_VERIFY, main
from evochain.config import EXAMPLE1


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr()


@pytest.mark.parametrize("example,s,t,label", [
    ("example1", "3.5", "4", "E7"),
    ("example3", "6", "7", "E7"),
    ("example2", "2.25", "3", "E5"),
])
def test_classify(capsys, example, s, t, label):
    code, out = run(capsys, "classify", "--example", example, "--s", s, "--t", t)
    assert code == EXIT_OK
    assert out.out.splitlines()[0] == label


def test_classify_second_chain_past_threshold(capsys, tmp_path):
    cfg = tmp_path / "m2.ini"
    cfg.write_text("[chain]\nfamily = M2\na = 1\n[function phi]\npieces = s^2 - 8*s + 13\n"
                   "[function psi]\npieces = s^2 - 5\n", encoding="utf-8")
    code, out = run(capsys, "classify", "--config", str(cfg), "--s", "0.5", "--t", "2", "--out", str(tmp_path))
    assert code == EXIT_OK and out.out.startswith("E0")
    assert json.loads((tmp_path / "report.json").read_text())["label"] == "E0"


def test_ck_check(capsys):
    assert run(capsys, "ck-check", "--example", "example1")[0] == EXIT_OK
    assert run(capsys, "ck-check", "--example", "example3")[0] == EXIT_OK


def test_ck_check_flags_corrupted_chain(capsys, tmp_path):
    cfg = tmp_path / "bad.ini"
    cfg.write_text(EXAMPLE1.replace("name = example1", "name = bad\nperturb = 0 0 1"), encoding="utf-8")
    code, out = run(capsys, "ck-check", "--config", str(cfg))
    assert code == EXIT_VERIFY and "FAIL" in out.out


def test_partition_files(capsys, tmp_path):
    code, _ = run(capsys, "partition", "--example", "example1", "--out", str(tmp_path))
    assert code == EXIT_OK
    doc = json.loads((tmp_path / "partition.json").read_text())
    assert [c["label"] for c in doc["1d"]["cells"]] == ["E8", "E9", "E7", "E8", "E9"]
    with open(tmp_path / "breakpoints.csv", newline="") as fh:
        rows = [r for r in csv.DictReader(fh) if r["mode"] == "1d"]
    values = [float(r["value"]) for r in rows]
    for v, want in zip(values, (2.75, 3, 4, 5.666667)):
        assert abs(v - want) <= 1e-6
    # seventeen significant digits round-trip exactly
    assert all(float(r["value"]) == float(f"{float(r['value']):.17g}") for r in rows)
    with open(tmp_path / "grid.csv", newline="") as fh:
        head = next(csv.reader(fh))
    assert head == ["mode", "s", "t", "label"]


def test_partition_output_is_byte_identical(capsys, tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    run(capsys, "partition", "--example", "example2", "--resolution", "512", "--out", str(a))
    run(capsys, "partition", "--example", "example2", "--resolution", "512", "--out", str(b))
    for name in ("partition.json", "grid.csv", "breakpoints.csv"):
        assert (a / name).read_bytes() == (b / name).read_bytes()


def test_examples_pass_and_ignore_seed(capsys):
    code, out = run(capsys, "examples")
    assert code == EXIT_OK
    assert out.out.split() == ["example1", "PASS", "example2", "PASS", "example3", "PASS"]
    code2, out2 = run(capsys, "examples", "--seed", "12345")
    assert code2 == EXIT_OK and out2.out == out.out


def test_examples_fail_with_absurd_tolerance(capsys):
    code, out = run(capsys, "examples", "--tol-zero", "0.5")
    assert code == EXIT_VERIFY and "FAIL" in out.out


def test_iso_search(capsys, tmp_path):
    code, out = run(capsys, "iso-search", "--source", "1,1,1,1,1,1,1,1,1", "--out", str(tmp_path))
    assert code == EXIT_OK and out.out.startswith("E7: found")
    doc = json.loads((tmp_path / "report.json").read_text())
    assert doc["verified_residual"] <= 1e-9
    code, _ = run(capsys, "iso-search", "--source", "1,0,0,0,0,0,0,0,0", "--target", "E0")
    assert code == EXIT_VERIFY


def test_iso_search_from_chain(capsys):
    code, out = run(capsys, "iso-search", "--example", "example3", "--s", "0.5", "--t", "2")
    assert code == EXIT_OK and out.out.startswith("E8")


def test_exit_codes_for_bad_input(capsys, tmp_path):
    bad = tmp_path / "bad.ini"
    bad.write_text("[chain]\nfamily = M1\n[function h]\npieces = 1/(s+\n[function f]\npieces = 1\n"
                   "[function g]\npieces = 1\n", encoding="utf-8")
    assert run(capsys, "classify", "--config", str(bad), "--s", "1", "--t", "2")[0] == EXIT_CONFIG
    assert run(capsys, "classify", "--config", str(tmp_path / "missing.ini"), "--s", "1", "--t", "2")[0] == EXIT_CONFIG
    assert run(capsys, "classify", "--s", "1", "--t", "2")[0] == EXIT_CONFIG
    assert run(capsys, "iso-search", "--source", "1,2")[0] == EXIT_CONFIG
    dom = tmp_path / "dom.ini"
    dom.write_text("[chain]\nfamily = M1\n[function h]\npieces = 1/(s-1)\n[function f]\npieces = 1\n"
                   "[function g]\npieces = 1\n", encoding="utf-8")
    code, out = run(capsys, "classify", "--config", str(dom), "--s", "1", "--t", "2")
    assert code == EXIT_DOMAIN and "domain error" in out.err
    assert run(capsys, "classify", "--example", "example1", "--s", "3", "--t", "2")[0] == EXIT_DOMAIN
