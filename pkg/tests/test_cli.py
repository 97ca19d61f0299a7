import json
import os
from fractions import Fraction

import pandas as pd
import pytest

import config
import main
from errors import ParameterError
from main import RunConfig, build_parser, dispatch
from report import ReportExporter


@pytest.fixture(autouse=True)
def quiet_environment(tmp_path, monkeypatch):
    monkeypatch.setattr(config, "LOG_DIR", str(tmp_path / "logs"))
    monkeypatch.setattr(main, "colorama_init", lambda: None)


def run(tmp_path, *argv, construction="build1d"):
    out = tmp_path / "out"
    code = dispatch(["--output-dir", str(out), "--construction", construction, *argv])
    return code, out


def read_json(path):
    with open(path, "r", encoding="utf-8") as f:
        return json.load(f)


# 配置

def test_default_config_is_valid():
    run_config = RunConfig.load(None)
    assert run_config.construction in ("build1d", "buildmd", "cantor", "sine")
    assert run_config.params_md().s(0) == 14


def test_config_round_trip():
    run_config = RunConfig.from_dict({"construction": "cantor", "gallery": {"cantor_depth": 12}, "seed": 0.25})
    assert RunConfig.from_dict(json.loads(run_config.dumps())) == run_config


def test_config_file_with_comments(tmp_path):
    path = tmp_path / "run.json5"
    path.write_text(
        "{\n"
        "  // 只改Cantor深度\n"
        "  construction: 'cantor',\n"
        "  gallery: {cantor_depth: 12,},\n"
        "}\n",
        encoding="utf-8",
    )
    run_config = RunConfig.load(str(path))
    assert run_config.construction == "cantor"
    assert run_config.gallery["cantor_depth"] == 12
    assert run_config.gallery["sine_segments"] == config.GALLERY_CONFIG["sine_segments"]


@pytest.mark.parametrize("data", [
    {"unknown": 1},
    {"construction": "spiral"},
    {"export": {"rational_format": "hex"}},
    {"analysis": {"scales": {"k_min": 8, "k_max": 2}}},
    {"build1d": {"a_rule": {"kind": "explicit", "values": ["1/16"]}}},
    {"buildmd": {"s_rule": {"kind": "fixed", "s": 10}}},
    {"buildmd": []},
    {"seed": 1.5},
])
def test_invalid_config(data):
    with pytest.raises(ParameterError):
        RunConfig.from_dict(data)


def test_unreadable_config(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{construction: ", encoding="utf-8")
    with pytest.raises(ParameterError):
        RunConfig.load(str(bad))
    with pytest.raises(ParameterError):
        RunConfig.load(str(tmp_path / "missing.json"))
    listing = tmp_path / "list.json"
    listing.write_text("[1, 2]", encoding="utf-8")
    with pytest.raises(ParameterError):
        RunConfig.load(str(listing))


# 导出

def test_exporter_json_is_deterministic(tmp_path):
    exporter = ReportExporter(str(tmp_path))
    payload = {"b": Fraction(1, 3), "a": [Fraction(2, 4), True, None]}
    first = open(exporter.write_json("r.json", payload), "rb").read()
    second = open(exporter.write_json("r.json", dict(reversed(list(payload.items())))), "rb").read()
    assert first == second
    assert read_json(tmp_path / "r.json") == {"a": ["1/2", True, None], "b": "1/3"}
    assert os.listdir(tmp_path) == ["r.json"]


def test_exporter_decimal_format(tmp_path):
    exporter = ReportExporter(str(tmp_path), rational_format="decimal", decimal_digits=5)
    assert exporter.format_value(Fraction(1, 3)) == "0.33333"
    with pytest.raises(ParameterError):
        ReportExporter(str(tmp_path), rational_format="hex")


def test_exporter_csv(tmp_path):
    exporter = ReportExporter(str(tmp_path))
    path = exporter.write_csv("t.csv", [{"x": Fraction(1, 3), "p": [Fraction(1, 2), Fraction(1, 4)]}], columns=["x", "p"])
    frame = pd.read_csv(path)
    assert list(frame.columns) == ["x", "p"]
    assert frame["x"][0] == "1/3"
    assert frame["p"][0] == "1/2 1/4"
    empty = exporter.write_csv("e.csv", [], columns=["x"])
    assert open(empty, encoding="utf-8").read() == "x\n"


# 命令行

def test_parser_requires_command():
    with pytest.raises(SystemExit):
        build_parser().parse_args([])


def test_eval_command(tmp_path, capsys):
    code, out = run(tmp_path, "eval", "--x", "7/8")
    assert code == 0
    result = read_json(out / "eval.json")
    assert result["lo"] == result["hi"] == "1/1"
    assert result["partial"] is False
    assert "1/1 1/1" in capsys.readouterr().out


def test_eval_output_is_reproducible(tmp_path):
    first = tmp_path / "a"
    second = tmp_path / "b"
    for out in (first, second):
        assert dispatch(["--output-dir", str(out), "--construction", "buildmd", "eval", "--x", "1/3,2/3"]) == 0
    assert (first / "eval.json").read_bytes() == (second / "eval.json").read_bytes()


def test_unknown_flag_exit_code(tmp_path):
    code, _ = run(tmp_path, "eval", "--x", "1/2", "--bogus")
    assert code == 2


def test_domain_error_exit_code(tmp_path, capsys):
    code, _ = run(tmp_path, "eval", "--x", "2")
    assert code == 1
    assert "错误" in capsys.readouterr().err


@pytest.mark.parametrize("argv, construction", [
    (["findpoint", "--z", "1/3"], "build1d"),
    (["length"], "cantor"),
    (["build"], "sine"),
    (["eval", "--x", "a/b"], "build1d"),
    (["export", "--samples", "1"], "cantor"),
])
def test_parameter_error_exit_code(tmp_path, argv, construction):
    code, _ = run(tmp_path, *argv, construction=construction)
    assert code == 2


def test_bad_config_exit_code(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"construction": "spiral"}', encoding="utf-8")
    assert dispatch(["--config", str(bad), "--output-dir", str(tmp_path), "eval", "--x", "1/2"]) == 2


def test_build_cantor(tmp_path):
    code, out = run(tmp_path, "build", "--depth", "3", construction="cantor")
    assert code == 0
    frame = pd.read_csv(out / "cantor_gaps.csv")
    assert len(frame) == 1 + 2 + 4
    assert list(frame.columns) == ["generation", "gap", "lo", "hi"]


def test_build_1d_tree(tmp_path):
    code, out = run(tmp_path, "build", "--depth", "1")
    assert code == 0
    frame = pd.read_csv(out / "build1d_tree.csv")
    assert frame["generation"].min() == 0
    assert frame["aspect"][0] == "1/1"


def test_build_md_tree(tmp_path):
    code, out = run(tmp_path, "build", "--depth", "2", construction="buildmd")
    assert code == 0
    payload = read_json(out / "buildmd_tree.json")
    assert payload["generations"][0]["s"] == 14
    assert payload["whitney"][0]["corner"] == ["1/4", "1/4"]
    assert payload["whitney"][0]["side"] == "1/8"


def test_levelset_1d(tmp_path):
    code, out = run(tmp_path, "levelset", "--y", "1/3", "--depth", "3")
    assert code == 0
    payload = read_json(out / "levelset.json")
    assert len(payload["points"]) >= 6
    assert payload["level"] == "1/3"


def test_levelset_cantor(tmp_path):
    code, out = run(tmp_path, "levelset", "--y", "1/3", "--depth", "4", construction="cantor")
    assert code == 0
    payload = read_json(out / "levelset.json")
    assert len(payload["components"]) >= 4
    assert payload["unresolved"] == 0


def test_levelset_sine(tmp_path):
    code, out = run(tmp_path, "levelset", "--y", "0", "--grid-n", "11", "--tol", "0", construction="sine")
    assert code == 0
    frame = pd.read_csv(out / "levelset.csv")
    assert len(frame) >= 11


def test_findpoint(tmp_path):
    code, out = run(tmp_path, "findpoint", "--z", "1/3", "--depth", "2", construction="buildmd")
    assert code == 0
    payload = read_json(out / "certificate.json")
    assert payload["verified"] == [True, True]
    assert payload["flags"] == []


def test_findpoint_exceptional(tmp_path):
    code, out = run(tmp_path, "findpoint", "--z", "0", "--depth", "2", construction="buildmd")
    assert code == 0
    assert read_json(out / "certificate.json")["flags"] == ["exceptional"]


def test_annulus_inconclusive(tmp_path):
    code, out = run(tmp_path, "annulus", "--z", "1/3", "--n", "1", "--depth", "3", construction="buildmd")
    assert code == 0
    payload = read_json(out / "annulus.json")
    assert payload["inconclusive"] is True
    assert payload["vacant"] is False


def test_density_exceptional_level(tmp_path):
    code, out = run(tmp_path, "density", "--z", "1/2", "--depth", "3", construction="buildmd")
    assert code == 0
    payload = read_json(out / "density.json")
    assert payload["certificate_ok"] is False
    assert payload["density"] is None


def test_oscillation_command(tmp_path):
    code, out = run(tmp_path, "oscillation", "--x", "1/3", construction="cantor")
    assert code == 0
    frame = pd.read_csv(out / "oscillation.csv")
    assert len(frame) == config.ANALYSIS_CONFIG["scales"]["k_max"] - config.ANALYSIS_CONFIG["scales"]["k_min"] + 1
    assert (frame["sampled_ratio"] <= frame["certified_ratio"] + 1e-12).all()


def test_length_command(tmp_path):
    code, out = run(tmp_path, "length", "--delta", "1/100", "--segments", "200000", construction="sine")
    assert code == 0
    payload = read_json(out / "length.json")
    assert payload["polyline_length"] <= payload["arc_length"] * 1.05


def test_export_cantor_graph(tmp_path):
    code, out = run(tmp_path, "export", "--samples", "5", construction="cantor")
    assert code == 0
    frame = pd.read_csv(out / "cantor_graph.csv")
    assert list(frame["x"]) == ["0/1", "1/4", "1/2", "3/4", "1/1"]
    assert frame["lo"][2] == "0/1"
