import json

import pytest
from click.testing import CliRunner

from cli import cli, run
from utils.settings import get_settings


@pytest.fixture
def runner():
    return CliRunner()


def test_ratio_command(capsys):
    assert run(["ratio", "--a", "11", "--n", "441"]) == 0
    out = capsys.readouterr().out
    assert "8/7" in out and "sum-dominant" in out


def test_card_command(capsys):
    assert run(["--format", "csv", "card", "--a", "1", "--n", "8"]) == 0
    assert capsys.readouterr().out.splitlines() == [
        "a,n,d,m,p,t,count,method,total",
        "1,8,2,2,2,3,2,small-power-table,2",
    ]


def test_card_command_reports_oracle_and_partial_results(capsys):
    assert run(["--format", "csv", "card", "--a", "1", "--n", "33", "--d", "3"]) == 0
    assert "oracle" in capsys.readouterr().out
    assert run(["--budget", "10", "card", "--a", "1", "--n", "3773", "--d", "3"]) == 2
    assert "budget" in capsys.readouterr().err


def test_verify_command(capsys):
    assert run(["--format", "csv", "verify", "--max-pp", "64", "--max-n", "30", "--two-primes"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "check,checked,mismatches"
    assert [line.split(",")[0] for line in lines[1:]] == ["prime-powers", "multiplicativity", "reflection", "two-primes"]
    assert all(line.endswith(",0") for line in lines[1:])


def test_scan_command_is_deterministic(capsys):
    args = ["--format", "csv", "scan", "--a", "4", "--max-n", "300", "--L", "3/2"]
    assert run(["--threads", "1", *args]) == 0
    single = capsys.readouterr().out
    assert run(["--threads", "4", *args]) == 0
    assert capsys.readouterr().out == single
    rows = single.splitlines()
    assert rows[0] == "a,n,c2,c2_decimal,classification"
    assert rows[1] == "4,3,2/1,2.000000,sum-dominant"


def test_density_command(capsys):
    assert run(["--format", "json", "density", "--a", "2", "--max-n", "500"]) == 0
    (report,) = json.loads(capsys.readouterr().out)
    assert report["k_a"] == "1/1"
    assert float(report["bound"]) > 0.97


def test_primorial_command(capsys):
    assert run(["--format", "csv", "primorial", "--a", "4", "--k-max", "2"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[1].startswith("4,2,1,3,2/1,")
    assert lines[2].startswith("4,2,2,21,8/3,")


def test_coverage_command(capsys):
    assert run(["--format", "json", "coverage", "--a", "3", "--n", "7"]) == 0
    (report,) = json.loads(capsys.readouterr().out)
    assert report["covered"] is False
    assert "0" in report["missing"].split()


def test_solve3_command(capsys):
    assert run(["--format", "json", "solve3", "--b", "0", "--a", "1", "--p", "11", "--t", "3"]) == 0
    (row,) = json.loads(capsys.readouterr().out)
    q = 11**3
    assert (row["x1"] + row["x2"] + row["x3"]) % q == 0
    assert row["x1"] * row["x2"] * row["x3"] % q == 1


def test_enumerate_command(capsys):
    assert run(["--format", "csv", "enumerate", "--a", "4", "--n", "5"]) == 0
    assert capsys.readouterr().out.splitlines() == ["x1,x2", "1,4", "2,2", "3,3", "4,1"]
    assert run(["--format", "csv", "enumerate", "--a", "4", "--n", "5", "--sumset"]) == 0
    assert capsys.readouterr().out.splitlines() == ["residue", "0", "1", "4"]


def test_plot_command(tmp_path, capsys):
    out = tmp_path / "h.svg"
    assert run(["plot", "--a", "51", "--n", "1024", "--out", str(out)]) == 0
    assert out.read_text().count("<rect") == 512


def test_usage_errors_exit_one(capsys):
    assert run(["ratio", "--a", "11"]) == 1
    assert run(["ratio", "--a", "11", "--n", "441", "--bogus"]) == 1
    assert run(["ratio", "--a", "3", "--n", "9"]) == 1
    assert "coprime" in capsys.readouterr().err


def test_computation_errors_exit_two(capsys):
    assert run(["--budget", "5", "enumerate", "--d", "3", "--a", "1", "--n", "11"]) == 2
    assert "budget" in capsys.readouterr().err
    assert run(["solve3", "--b", "0", "--a", "1", "--p", "7"]) == 2


def test_help_exits_cleanly(capsys):
    assert run(["--help"]) == 0
    assert "scan" in capsys.readouterr().out


def test_threads_from_environment(runner):
    result = runner.invoke(cli, ["ratio", "--a", "1", "--n", "9"], env={"MODHYP_THREADS": "2"})
    assert result.exit_code == 0
    assert "2/3" in result.output
    result = runner.invoke(cli, ["ratio", "--a", "1", "--n", "9"], env={"MODHYP_THREADS": "zero"})
    assert result.exit_code != 0


def test_verbose_logs_to_stderr(capsys):
    assert run(["--verbose", "ratio", "--a", "11", "--n", "441"]) == 0
    captured = capsys.readouterr()
    assert "c_2(11;3^2) = 3/2" in captured.err
    assert "c_2(11;3^2)" not in captured.out


@pytest.fixture
def fresh_settings():
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.mark.parametrize("name, value", [
    ("MODHYP_LOG_LEVEL", "LOUD"),
    ("MODHYP_BUDGET", "lots"),
    ("MODHYP_BUDGET", "0"),
])
def test_bad_environment_exits_one(monkeypatch, fresh_settings, capsys, name, value):
    monkeypatch.setenv(name, value)
    assert run(["ratio", "--a", "11", "--n", "441"]) == 1
    assert name in capsys.readouterr().err


def test_log_level_from_environment(monkeypatch, fresh_settings):
    monkeypatch.setenv("MODHYP_LOG_LEVEL", "info")
    assert get_settings().log_level == "INFO"


def test_modulus_one_rejected(capsys):
    assert run(["ratio", "--a", "3", "--n", "1"]) == 1
    assert "at least 2" in capsys.readouterr().err
