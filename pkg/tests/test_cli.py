"""Command-line interface: argument handling, output text, exit codes."""

import json
import subprocess
import sys

import pytest

from mhslab.cli import build_parser, main, parse_primes


def run_cli(argv, capsys):
    code = main(argv)
    return code, capsys.readouterr().out


def run_cli_error(argv, capsys):
    with pytest.raises(SystemExit) as exc:
        main(argv)
    return exc.value.code, capsys.readouterr().err


# --- eval ------------------------------------------------------------------


def test_eval_exact(capsys):
    assert run_cli(["eval", "--mhs", "1,2", "--n", "6"], capsys) == (0, "2929/4320\n")


def test_eval_mod_prime_power(capsys):
    code, out = run_cli(["eval", "--mhs", "1,3,1", "--prime", "7", "--e", "2"], capsys)
    assert (code, out) == (0, "14 (mod 49)\n")


def test_eval_weighted_sums(capsys):
    assert run_cli(["eval", "--wsum2", "1,1,1", "--prime", "7"], capsys) == (
        0,
        "3 (mod 7)\n",
    )
    code, out = run_cli(["eval", "--wsum3", "2,2,2,3", "--n", "5"], capsys)
    assert code == 0
    assert out == "19444115078101727/10077696000000000\n"


@pytest.mark.parametrize(
    "argv",
    [
        ["eval", "--mhs", "1,2"],  # neither --n nor --prime
        ["eval", "--mhs", "1,2", "--n", "5", "--prime", "7"],  # both
        ["eval", "--n", "5"],  # no sum selected
        ["eval", "--mhs", "1", "--wsum2", "1,1,1", "--n", "5"],  # two sums
        ["eval", "--wsum2", "1,1", "--n", "5"],  # wrong arity
        ["eval", "--wsum3", "1,1,1", "--n", "5"],
        ["eval", "--mhs", "1,x", "--n", "5"],  # unparseable composition
        ["eval", "--mhs", "1", "--prime", "9"],  # composite modulus
    ],
)
def test_eval_usage_errors(argv, capsys):
    code, err = run_cli_error(argv, capsys)
    assert code == 2
    assert err


# --- stuffle / bernoulli ---------------------------------------------------


def test_stuffle_output(capsys):
    assert run_cli(["stuffle", "--a", "1", "--b", "2"], capsys) == (
        0,
        "(1,2) + (2,1) + (3)\n",
    )


def test_stuffle_bad_input(capsys):
    code, _ = run_cli_error(["stuffle", "--a", "0", "--b", "1"], capsys)
    assert code == 2


def test_bernoulli_exact(capsys):
    assert run_cli(["bernoulli", "--n", "12"], capsys) == (0, "-691/2730\n")


def test_bernoulli_mod(capsys):
    assert run_cli(["bernoulli", "--n", "4", "--prime", "7"], capsys) == (
        0,
        "3 (mod 7)\n",
    )


def test_bernoulli_pole_is_a_usage_error(capsys):
    code, err = run_cli_error(["bernoulli", "--n", "6", "--prime", "7"], capsys)
    assert code == 2
    assert "denominator" in err


# --- identity --------------------------------------------------------------


def test_identity_thm21(capsys):
    code, out = run_cli(["identity", "--thm", "2.1", "--smax", "2", "--nmax", "10"], capsys)
    assert code == 0
    assert out == "thm21: 176 instances, 0 failures\n"


def test_identity_thm31_at_primes(capsys):
    code, out = run_cli(
        ["identity", "--thm", "3.1", "--at-primes", "5,7", "--smax", "2"], capsys
    )
    assert code == 0
    assert out == "thm31: 32 instances, 0 failures\n"


def test_identity_thm31_with_probes(capsys):
    code, out = run_cli(["identity", "--thm", "3.1", "--smax", "2", "--probes", "5"], capsys)
    assert code == 0
    assert out.splitlines() == [
        "thm31: 64 instances, 0 failures",
        "thm31-general-n: 5 instances, 0 failures",
    ]


def test_identity_bad_smax(capsys):
    code, _ = run_cli_error(["identity", "--thm", "2.1", "--smax", "0"], capsys)
    assert code == 2


# --- scan ------------------------------------------------------------------


def test_scan_text_output(capsys):
    code, out = run_cli(["scan", "--check", "h-ones-modp3", "--primes", "5,7"], capsys)
    assert code == 0
    assert out.splitlines() == [
        "h-ones-modp3  p=5  pass",
        "h-ones-modp3  p=7  pass",
        "2 primes: 2 pass, 0 fail, 0 skipped",
    ]


def test_scan_csv_output(capsys):
    code, out = run_cli(
        ["scan", "--check", "cor-sun-modp", "--primes", "5,7", "--format", "csv"], capsys
    )
    assert code == 0
    assert out == (
        "check_id,p,e,status,lhs,rhs,note\n"
        "cor-sun-modp,5,1,skipped(hypothesis),,,requires p >= 6\n"
        "cor-sun-modp,7,1,pass,s=1=3,s=1=3,\n"
    )


def test_scan_json_output(capsys):
    code, out = run_cli(
        ["scan", "--check", "cor-sun-modp", "--primes", "7..20", "--format", "json"],
        capsys,
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["schema"] == 1
    assert [r["p"] for r in doc["reports"]] == [7, 11, 13, 17, 19]
    assert all(r["status"] == "pass" for r in doc["reports"])


def test_scan_failures_set_exit_code(capsys):
    code, out = run_cli(["scan", "--check", "cor34-first", "--primes", "11..31"], capsys)
    assert code == 1
    assert "fitted=-11/3" in out
    assert out.strip().endswith("7 primes: 0 pass, 7 fail, 0 skipped")


def test_scan_all_skipped_is_success(capsys):
    code, out = run_cli(
        ["scan", "--check", "hoffman-chain-B3sq", "--primes", "7,7"], capsys
    )
    assert code == 0
    assert "skipped(hypothesis)" in out
    assert out.strip().endswith("1 primes: 0 pass, 0 fail, 1 skipped")


def test_scan_rejects_bad_primes(capsys):
    code, _ = run_cli_error(["scan", "--check", "cor-sun-modp", "--primes", "4,6"], capsys)
    assert code == 2
    code, _ = run_cli_error(["scan", "--check", "oops", "--primes", "7"], capsys)
    assert code == 2


# --- fit -------------------------------------------------------------------


def test_fit_known_family(capsys):
    assert run_cli(["fit", "--family", "sun-s1", "--primes", "7..50"], capsys) == (
        0,
        "1\n",
    )


def test_fit_family_with_override(capsys):
    code, out = run_cli(
        ["fit", "--family", "cor34-1", "--primes", "11..100"], capsys
    )
    assert (code, out) == (0, "-11/3\n")


def test_fit_unknown_family_lists_choices(capsys):
    code, err = run_cli_error(["fit", "--family", "huh", "--primes", "7..50"], capsys)
    assert code == 2
    assert "sun-s1" in err


def test_fit_insufficient_primes(capsys):
    code, _ = run_cli_error(["fit", "--family", "sun-s1", "--primes", "5,7"], capsys)
    assert code == 2


# --- plumbing --------------------------------------------------------------


def test_parse_primes():
    assert parse_primes("2..12") == [3, 5, 7, 11]
    assert parse_primes("7,11") == [7, 11]
    assert parse_primes(" 7 , 11 ") == [7, 11]
    assert parse_primes("7,,11") == [7, 11]  # blank entries are ignored
    for bad in ("", "9", "4", "2", "5..3", "a..b"):
        with pytest.raises(ValueError):
            parse_primes(bad)


def test_parser_top_level():
    with pytest.raises(SystemExit) as exc:
        main([])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["--help"])
    assert exc.value.code == 0
    assert build_parser().prog == "mhslab"


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "mhslab", "bernoulli", "--n", "10"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert proc.stdout == "5/66\n"
