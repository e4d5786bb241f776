"""
Test script for the command-line interface.

Runs subcommands through main() and checks exit codes, report contents,
config-file precedence and run-to-run determinism.
"""

import json
import math

import pytest

from zerolab.cli import COMMANDS, EXERCISES, create_parser, load_config_file, main, parse_args, run
from zerolab.configuration_service import ConfigurationService
from zerolab.models import RunConfig


def run_cli(capsys, *argv):
    """Run main with argv and return (exit code, stdout, stderr)."""
    with pytest.raises(SystemExit) as excinfo:
        main(list(argv))
    captured = capsys.readouterr()
    return excinfo.value.code, captured.out, captured.err


def test_every_command_has_a_subparser():
    parser = create_parser()
    for name in COMMANDS:
        assert parser.parse_args([name]).command == name


@pytest.mark.parametrize("name", sorted(COMMANDS))
def test_help_names_the_result_exercised(capsys, name):
    code, out, _ = run_cli(capsys, name, "--help")
    assert code == 0
    squashed = "".join(out.split())
    assert "Exercises" in squashed
    assert "".join(EXERCISES[name].split()) in squashed
    assert "CSVcolumns:" in squashed


def test_second_moment_past_prime_budget(capsys):
    """A cutoff far beyond the prime budget is a resource error, exit 2."""
    code, out, _ = run_cli(capsys, "second-moment", "--log-c", "2000", "--quiet")
    assert code == 2
    assert out == ""


def test_malformed_environment_exits_1(monkeypatch, capsys):
    monkeypatch.setenv("ZEROLAB_THREADS", "abc")
    service = ConfigurationService()
    monkeypatch.setattr("zerolab.cli.get_configuration", lambda: service)
    code, out, err = run_cli(capsys, "primes", "--limit", "30", "--quiet")
    assert code == 1
    assert out == ""
    assert "ZEROLAB_THREADS" in err


def test_nonvanish_json(capsys):
    code, out, _ = run_cli(capsys, "nonvanish", "--support", "2/3", "--out", "json", "--quiet")
    assert code == 0
    document = json.loads(out)
    assert document["schema_version"] == "1"
    assert document["command"] == "nonvanish"
    result = document["results"][0]
    assert result["multiplicity_bound"] == pytest.approx(2.0)
    assert result["multiplicity_bound_exact"] == "2"
    assert result["nontrivial"] is False
    assert document["order_bounds"]["2"] == pytest.approx(1.0)


def test_nonvanish_decimal_support(capsys):
    code, out, _ = run_cli(capsys, "nonvanish", "--support", "0.6667", "--quiet")
    assert code == 0
    header, row = out.strip().splitlines()
    assert header == "support,multiplicity_bound,p0_lower,nontrivial,multiplicity_bound_exact,p0_lower_exact"
    assert float(row.split(",")[1]) == pytest.approx(2.0, abs=1e-3)


def test_primes_csv(capsys):
    code, out, _ = run_cli(capsys, "primes", "--limit", "30", "--quiet")
    assert code == 0
    assert out == "limit,count,largest,tail\n30,10,29,2 3 5 7 11 13 17 19 23 29\n"


def test_primes_over_budget(capsys):
    code, out, _ = run_cli(capsys, "primes", "--limit", str(10**9), "--quiet")
    assert code == 2
    assert out == ""


def test_sieve_check(capsys):
    code, out, _ = run_cli(capsys, "sieve-check", "--q-max", "100", "--vectors", "2", "--quiet")
    assert code == 0
    assert "all exact" in out
    assert out.splitlines()[1].startswith("100,2,200,0,0,")


def test_unknown_command(capsys):
    code, out, _ = run_cli(capsys, "bogus")
    assert code == 1
    assert out == ""


def test_run_rejects_unregistered_command():
    assert run(RunConfig(command="bogus", verbose=False)) == 1


def test_bad_flag_value(capsys):
    code, _, _ = run_cli(capsys, "rmt-density", "--group", "GL")
    assert code == 1


def test_rmt_density_is_thread_independent(capsys):
    argv = ["rmt-density", "--group", "USp", "--dim", "3", "--draws", "40", "--seed", "7",
            "--test-fn", "fejer:0.8", "--quiet"]
    code, one, _ = run_cli(capsys, *argv, "--threads", "1")
    assert code == 0
    code, three, _ = run_cli(capsys, *argv, "--threads", "3")
    assert code == 0
    assert one == three
    assert one.splitlines()[0] == "group,n,draws,statistic,mean,stderr,target,abs_dev"
    assert one.splitlines()[1].startswith("USp,6,40,one_level,")


def test_kernel_pair(capsys):
    code, out, _ = run_cli(capsys, "kernel-pair", "--kernel", "O", "--test-fn", "fejer:0.8", "--out", "json", "--quiet")
    assert code == 0
    result = json.loads(out)["results"][0]
    assert result["kernel"] == "O"
    assert result["pairing"] == pytest.approx(1.4, abs=1e-12)
    assert result["spatial_pairing"] is None


def test_indist_check(capsys):
    code, out, _ = run_cli(capsys, "indist-check", "--test-fn", "fejer:0.9", "--out", "json", "--quiet")
    assert code == 0
    document = json.loads(out)
    assert document["indistinguishable"] is True
    assert document["o_minus_sp"] == pytest.approx(0.9, abs=1e-12)
    assert len(document["results"]) == 5


def test_verify_testfn(capsys):
    code, out, _ = run_cli(capsys, "verify-testfn", "--test-fn", "fejer:1", "--quiet")
    assert code == 0
    assert out.splitlines()[1].startswith("fejer:1.0,True,")
    code, _, _ = run_cli(capsys, "verify-testfn", "--tol", "0", "--quiet")
    assert code == 1


def test_second_moment(capsys):
    code, out, _ = run_cli(capsys, "second-moment", "--log-c", "1", "30", "--out", "json", "--quiet")
    assert code == 0
    results = json.loads(out)["results"]
    assert results[0]["sum"] == 0.0
    assert results[0]["deviation"] == pytest.approx(-0.5)
    assert abs(results[1]["deviation"]) <= 0.1


def test_ef_density_synthetic(capsys):
    code, out, _ = run_cli(capsys, "ef-density", "--conductor", "1000", "--test-fn", "fejer:0.5",
                           "--nu-max", "3", "--out", "json", "--quiet")
    assert code == 0
    document = json.loads(out)
    result = document["results"][0]
    assert result["source"] == "synthetic:sato-tate:0"
    assert result["nu_max"] == 3
    assert len(document["per_nu"]) == 3
    assert result["value"] == pytest.approx(result["leading"] - math.fsum(document["per_nu"]), abs=1e-12)


def test_ef_density_from_file(tmp_path, capsys):
    path = tmp_path / "tiny.coeffs"
    path.write_text("conductor 3.0 root 1\n2 0.5\n3 1.5\n5 2.5\n")
    code, out, _ = run_cli(capsys, "ef-density", "--coeffs", str(path), "--quiet")
    assert code == 0
    assert out.splitlines()[1].split(",")[3] == "1.0"


def test_ef_density_malformed_file(tmp_path, capsys):
    path = tmp_path / "broken.coeffs"
    path.write_text("conductor 10 root 1\n2 0.5\n4 0.5\n")
    code, out, _ = run_cli(capsys, "ef-density", "--coeffs", str(path), "--quiet")
    assert code == 1
    assert out == ""


def test_ef_density_horizon_too_small(tmp_path, capsys):
    path = tmp_path / "short.coeffs"
    path.write_text("conductor 1000000 root 1\n2 0.5\n3 1.5\n")
    code, _, _ = run_cli(capsys, "ef-density", "--coeffs", str(path), "--quiet")
    assert code == 1


def test_density_from_zeros(tmp_path, capsys):
    c = math.exp(12)
    g = 2 * math.pi / 12
    path = tmp_path / "pair.zeros"
    path.write_text(f"conductor {c!r}\n{-g!r}\n{g!r}\n")
    code, out, _ = run_cli(capsys, "density-from-zeros", "--zeros", str(path), "--test-fn", "fejer:0.5",
                           "--out", "json", "--quiet")
    assert code == 0
    result = json.loads(out)["results"][0]
    assert result["zeros"] == 2
    assert result["density"] == pytest.approx(2 * 0.5 * (2 / math.pi) ** 2, abs=1e-9)
    assert result["central_order"] == 0


def test_density_from_zeros_needs_files(capsys):
    code, _, _ = run_cli(capsys, "density-from-zeros", "--quiet")
    assert code == 1


def test_family_density(capsys):
    code, out, _ = run_cli(capsys, "family-density", "--size", "4", "--conductor", "1000",
                           "--out", "json", "--quiet")
    assert code == 0
    document = json.loads(out)
    densities = [row["density"] for row in document["results"]]
    assert len(densities) == 4
    assert document["mean"] == pytest.approx(sum(densities) / 4, abs=1e-12)
    assert document["predicted"] == pytest.approx(1.25)


def test_out_path(tmp_path, capsys):
    target = tmp_path / "primes.csv"
    code, out, _ = run_cli(capsys, "primes", "--limit", "10", "--out-path", str(target), "--quiet")
    assert code == 0
    assert out == ""
    assert target.read_text() == "limit,count,largest,tail\n10,4,7,2 3 5 7\n"


def test_log_file(tmp_path, capsys):
    log = tmp_path / "run.html"
    code, _, _ = run_cli(capsys, "primes", "--limit", "10", "--log-file", str(log))
    assert code == 0
    assert log.exists()


def test_config_file_precedence(tmp_path, capsys):
    config = tmp_path / "run.conf"
    config.write_text("limit = 50\ntail = 2\nquiet = true\n")
    assert load_config_file(str(config)) == ["--limit", "50", "--tail", "2", "--quiet"]
    code, out, _ = run_cli(capsys, "primes", "--config", str(config))
    assert code == 0
    assert out.splitlines()[1] == "50,15,47,43 47"
    code, out, _ = run_cli(capsys, "primes", "--config", str(config), "--limit", "30")
    assert code == 0
    assert out.splitlines()[1] == "30,10,29,23 29"


def test_missing_config_file(tmp_path, capsys):
    code, _, _ = run_cli(capsys, "primes", "--config", str(tmp_path / "absent.conf"))
    assert code == 1


def test_parse_args_defaults():
    args = parse_args(["rmt-paircorr"])
    assert args.group == "U"
    assert args.dim == 30
    assert args.draws == 20000
    assert args.scaling == "matrix-size"
