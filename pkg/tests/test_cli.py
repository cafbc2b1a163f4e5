import json

import pytest

from mensura import cli, config, data
from mensura.util import NumericalError, UsageError


@pytest.fixture(autouse=True)
def no_user_config(monkeypatch):
    monkeypatch.setattr(config, "config_file_path", lambda: None)


@pytest.fixture(scope="module")
def cherry():
    return data.cherry_dataset()


def run(*args):
    with pytest.raises(SystemExit) as excinfo:
        cli.run(list(args))
    return excinfo.value.code


def test_evaluate_model_matches_direct_arithmetic(cherry):
    predictions = cli.evaluate_model("0.302 * h * d**2", cherry)
    record = cherry[0]
    assert predictions[0] == pytest.approx(0.302 * record.height_ft * record.dbh_ft ** 2)
    assert len(predictions) == 31


def test_evaluate_model_knows_inches(cherry):
    predictions = cli.evaluate_model("d_in**2 / (0.033 + 393.336 / h)", cherry)
    assert predictions[0] == pytest.approx(12.188, abs=0.001)


@pytest.mark.parametrize("expression", ["d *", "undefined_name * d", "'text'", "d > 1"])
def test_evaluate_model_rejects_bad_expressions(cherry, expression):
    with pytest.raises(UsageError):
        cli.evaluate_model(expression, cherry)


def test_evaluate_model_rejects_infinite_values(cherry):
    with pytest.raises(NumericalError):
        cli.evaluate_model("1e308 * 1e308", cherry)


def test_version(capsys):
    assert run("--version") == 0
    assert capsys.readouterr().out.startswith("mensura version ")


def test_no_command(capsys):
    assert run() == 2
    assert "no command given" in capsys.readouterr().err


def test_pi_command(capsys):
    assert run("pi", "V:L^3", "d:L", "h:L") == 0
    result = json.loads(capsys.readouterr().out)
    assert result["size"]["value"] == 2
    assert result["groups"] == {"pi0": "V/d^3", "pi1": "V/h^3"}


def test_propagate_command(capsys):
    assert run("propagate", "--dbh", "20.6", "--dbh-unit", "in", "--height", "87") == 0
    result = json.loads(capsys.readouterr().out)
    assert result["var_V"]["value"] == pytest.approx(13.7, abs=0.1)


def test_flags_override_the_error_model(capsys):
    assert run("propagate", "--dbh", "1.1", "--height", "76", "--rho", "0") == 0
    result = json.loads(capsys.readouterr().out)
    assert result["term_cross"]["value"] == 0.0


def test_zero_gamma0_is_not_replaced_by_the_configured_value(capsys):
    assert run("propagate", "--dbh", "1.1", "--height", "76", "--gamma0", "0") == 0
    result = json.loads(capsys.readouterr().out)
    assert result["gamma0"]["value"] == 0.0
    assert result["var_V"]["value"] == 0.0


@pytest.mark.parametrize("given, expected", [(None, 0.302), (0.0, 0.0), (0.5, 0.5)])
def test_gamma0_from(given, expected):
    args = cli.parse_args(["propagate", "--dbh", "1", "--height", "70"])
    args.gamma0 = given
    assert cli.gamma0_from(args, {"da_gamma": 0.302}) == expected


def test_volume_command(capsys):
    args = ("--model", "cylinder", "--dbh", "1", "--dbh-unit", "ft", "--height", "10")
    assert run("volume", *args) == 0
    result = json.loads(capsys.readouterr().out)
    assert result["volume"]["value"] == pytest.approx(7.853982, abs=1e-6)


def test_frustum_needs_lambda(capsys):
    assert run("volume", "--dbh", "12", "--height", "70") == 2
    assert "--lambda is required" in capsys.readouterr().err


def test_rss_command(capsys):
    assert run("rss", "--model", "0.302*h*d**2", "--format", "yaml") == 0
    assert "rss:" in capsys.readouterr().out


@pytest.mark.parametrize(
    "args, code",
    [
        (("analyze", "--csv", "no/such/file.csv"), 3),
        (("analyze", "--rho", "3"), 2),
        (("pi", "V:L^3", "d:L", "h:Q"), 2),
        (("volume", "--model", "frustum", "--lambda", "2", "--dbh", "1", "--height", "1"), 4),
        (("rss", "--model", "h/(d-d)"), 2),
        (("analyze", "--format", "xml"), 2),
    ],
)
def test_exit_codes(capsys, args, code):
    assert run(*args) == code
    err = capsys.readouterr().err
    assert len(err.strip().splitlines()) >= 1


def test_errors_are_one_line(tmp_path, capsys):
    settings = tmp_path / "plain.yaml"
    settings.write_text("colors:\n  error: none\n", encoding="utf-8")
    assert run("analyze", "--config", str(settings), "--csv", "missing.csv") == 3
    err = capsys.readouterr().err
    assert err.startswith("[ERROR: cannot read missing.csv")
    assert len(err.strip().splitlines()) == 1


def test_out_directory(tmp_path, capsys):
    assert run("pi", "x:L", "--out", str(tmp_path), "--format", "csv") == 0
    assert (tmp_path / "pi.csv").exists()
    assert "[Report exported to" in capsys.readouterr().err


def test_plot_writes_svg_and_csv(tmp_path, capsys):
    assert run("plot", "pi-scatter", "--out", str(tmp_path)) == 0
    assert (tmp_path / "pi-scatter.svg").exists()
    assert (tmp_path / "pi-scatter.csv").exists()
    assert "[Plot written to" in capsys.readouterr().err


def test_warns_when_the_published_numbers_are_for_another_sample(tmp_path, capsys):
    path = tmp_path / "thirty.csv"
    rows = ["dbh,height,volume"] + [",".join(map(repr, row)) for row in data.CHERRY_TABLE[:30]]
    path.write_text("\n".join(rows) + "\n", encoding="utf-8")
    assert run("analyze", "--csv", str(path), "--paper-reference", "cherry") == 0
    captured = capsys.readouterr()
    assert "comparing 30 trees with numbers published for 31 (cherry)" in captured.err
    assert json.loads(captured.out)["dataset"]["records"]["value"] == 30


def test_builtin_cherry_has_no_warning(capsys):
    assert run("analyze") == 0
    assert "WARNING" not in capsys.readouterr().err
