import json

import pytest

from app.cli import main
from app.config import settings

SMALL = ["--resolution", "32x32"]


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_regions_writes_artifacts(tmp_path, capsys):
    code, out, _ = run(capsys, "--config", "builtin:rigid_rotation", *SMALL, "--out", str(tmp_path), "regions")
    assert code == 0
    assert (tmp_path / "regions.pgm").read_bytes().startswith(b"P5\n32 32\n255\n")
    report = json.loads(out)
    assert report["status"] == "completed"
    assert report["result"]["killing_character"] == "arbitrary"
    assert json.loads((tmp_path / "regions.json").read_text()) == report["result"]


def test_dist_without_wind(tmp_path, capsys):
    code, out, _ = run(
        capsys, "--config", "builtin:zero_wind", *SMALL, "--horizon", "1.5", "--out", str(tmp_path), "dist", "0,0", "1,0"
    )
    assert code == 0
    assert json.loads(out)["result"]["value"] == pytest.approx(1.0, abs=0.4)


def test_norm_values(tmp_path, capsys):
    code, out, _ = run(capsys, "--config", "builtin:strong_constant", *SMALL, "--out", str(tmp_path), "norm", "0,0,1,0")
    assert code == 0
    row = json.loads(out)["result"]["values"][0]
    assert row["F"] == pytest.approx(1.0 / 3.0)
    assert row["F_l"] == pytest.approx(1.0)
    assert row["region"] == "strong"


def test_ball_svg(tmp_path, capsys):
    code, _, _ = run(capsys, "--config", "builtin:zero_wind", *SMALL, "--out", str(tmp_path), "ball", "0,0", "1")
    assert code == 0
    assert (tmp_path / "ball.svg").read_text().count("<path") == 1
    assert (tmp_path / "ball_open.pgm").exists()


def test_scenario_file(tmp_path, capsys):
    scenario = tmp_path / "calm.toml"
    scenario.write_text(
        'format = 1\nname = "calm"\n[domain]\nbox = [-1.0, 1.0, -1.0, 1.0]\nresolution = [16, 16]\n'
        "[wind]\nwx = 0.0\nwy = 0.0\n",
        encoding="utf-8",
    )
    code, out, _ = run(capsys, "--config", str(scenario), "--out", str(tmp_path / "out"), "regions")
    assert code == 0
    assert json.loads(out)["result"]["scenario"] == "calm"


@pytest.mark.parametrize(
    "argv",
    [
        ["--config", "builtin:hurricane", "regions"],
        ["regions"],
        ["--config", "builtin:zero_wind", "--resolution", "big", "regions"],
        ["--config", "builtin:zero_wind", *SMALL, "dist", "0,0", "9,9"],
        ["--config", "builtin:zero_wind", *SMALL, "ball", "0,0", "-1"],
        ["--config", "builtin:zero_wind"],
        ["--config", "builtin:zero_wind", "teleport"],
        ["--config", "builtin:strong_constant", *SMALL, "crosscheck", "0,0", "0.5", "--count", "50"],
    ],
)
def test_usage_errors(tmp_path, capsys, argv):
    code, _, err = run(capsys, "--out", str(tmp_path), *argv)
    assert code == 1


def test_config_diagnostics_on_stderr(tmp_path, capsys):
    scenario = tmp_path / "bad.toml"
    scenario.write_text("format = 1\ncolour = 1\n", encoding="utf-8")
    code, out, err = run(capsys, "--config", str(scenario), "regions")
    assert code == 1
    assert out == ""
    assert "unknown key 'colour'" in err
    assert "line 2" in err


def test_numerical_failure(tmp_path, capsys):
    code, _, err = run(
        capsys,
        "--config",
        "builtin:strong_constant",
        *SMALL,
        "--out",
        str(tmp_path),
        "geodesic",
        "0,0",
        "--velocity",
        "0,1",
        "--length",
        "1",
    )
    assert code == 2
    assert "not admissible" in err


def test_help(capsys):
    assert main(["--help"]) == 0
    assert "builtin:NAME" in capsys.readouterr().out


def test_crosscheck_sampler_floor(tmp_path, capsys, monkeypatch):
    monkeypatch.setattr(settings, "sampler_count", 10)
    code, out, _ = run(
        capsys, "--config", "builtin:strong_constant", *SMALL, "--out", str(tmp_path), "crosscheck", "0,0", "0.5", "--count", "150"
    )
    assert code == 0
    assert json.loads(out)["result"]["sampler"]["requested"] == 100


def test_negative_coordinates_after_separator(tmp_path, capsys):
    code, out, _ = run(
        capsys, "--config", "builtin:zero_wind", *SMALL, "--horizon", "1.5", "--out", str(tmp_path), "dist", "--", "-1,0", "0,0"
    )
    assert code == 0
    result = json.loads(out)["result"]
    assert result["x"] == [-1.0, 0.0]
    assert result["value"] == pytest.approx(1.0, abs=0.4)
