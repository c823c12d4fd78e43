import json
import subprocess
import sys

import pytest

from gre.cli import EXIT_FAIL, EXIT_OK, EXIT_RESOURCE, EXIT_USAGE, main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_counterexample_suite(capsys):
    code, out, _ = run(capsys, "verify", "counterexample", "--p0", "5")
    assert code == EXIT_OK
    doc = json.loads(out)
    assert doc["passed"] and doc["report"]["identity"] == "exact"
    assert doc["report"]["failure_set"] == [a for a in range(1, 21) if a % 5]


def test_theorem2_suite(capsys):
    code, out, _ = run(capsys, "verify", "theorem2", "--eta", "1.5")
    assert code == EXIT_OK
    assert json.loads(out)["report"]["max_residual"] < 1e-9


def test_csum_suite_small_sieve(capsys):
    code, out, _ = run(capsys, "verify", "csum-identities", "--sieve-limit", "300")
    doc = json.loads(out)
    assert code == EXIT_OK
    assert doc["report"]["grid"] == [256, 256]
    assert doc["report"]["method_agreement_mismatches"] == 0


@pytest.mark.parametrize(
    "argv",
    [
        ["no-such-suite"],
        ["theorem1", "--eta", "nope"],
        ["theorem2", "--eta", "0.8"],
        ["counterexample", "--p0", "9"],
        ["counterexample", "--p0", "2"],
        ["csum-identities", "--sieve-limit", "100"],
        ["theorem4", "--format", "xml"],
        [],
    ],
)
def test_usage_errors(capsys, argv):
    assert run(capsys, *argv)[0] == EXIT_USAGE


def test_resource_error(capsys):
    assert run(capsys, "theorem4", "--sieve-limit", str(10**12))[0] == EXIT_RESOURCE


def test_failing_suite_exit_code(capsys):
    code, out, err = run(capsys, "zero-expansions", "--sieve-limit", "100000")
    assert code == EXIT_FAIL
    assert json.loads(out)["passed"] is False
    assert "FAIL" in err


@pytest.mark.parametrize("suite", ["theorem4", "transforms-roundtrip", "remark8"])
def test_deterministic_json(capsys, tmp_path, suite):
    paths = [tmp_path / f"{suite}-{i}.json" for i in range(2)]
    for p in paths:
        assert main([suite, "--out", str(p), "--seed", "7"]) == EXIT_OK
    assert paths[0].read_bytes() == paths[1].read_bytes()
    assert "time" not in paths[0].read_text()


def test_seed_changes_random_suites(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    main(["theorem2", "--out", str(a), "--seed", "1"])
    main(["theorem2", "--out", str(b), "--seed", "2"])
    assert a.read_bytes() != b.read_bytes()


def test_floats_have_17_digits(capsys):
    _, out, _ = run(capsys, "remark7")
    C = json.loads(out)["report"]["fitted_constant"]
    assert repr(C) in out or format(C, ".17g") in out


def test_csv_output(capsys):
    code, out, _ = run(capsys, "counterexample", "--format", "csv")
    lines = out.splitlines()
    assert code == EXIT_OK
    assert lines[0] == "a,lhs_re,lhs_im,rhs_re,rhs_im,equal"
    assert lines[1].split(",")[:2] == ["1", "4"]


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "gre", "theorem4"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["report"]["counterexample"]["verdict"] == "no-GRE-possible"
