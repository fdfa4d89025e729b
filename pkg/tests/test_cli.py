import json
import subprocess
import sys
from pathlib import Path

import pytest

from cvtda.cli import build_parser, main, resolve_config

DATA = Path(__file__).resolve().parents[1] / "data"


def test_analyze_stdout(capsys):
    assert main(["analyze", "--input", str(DATA / "circle8.csv"), "--epsilons", "0.8"]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["betti"][0]["betti"][:2] == [1, 1]


def test_analyze_out_dir(tmp_path, capsys):
    code = main(["analyze", "--input", str(DATA / "octahedron.csv"), "--epsilons", "1.5", "--out", str(tmp_path)])
    assert code == 0
    assert "report written" in capsys.readouterr().out
    assert json.loads((tmp_path / "report.json").read_text())["betti"][0]["betti"][:3] == [1, 0, 1]


def test_missing_file_is_io_error(tmp_path):
    assert main(["analyze", "--input", str(tmp_path / "nope.csv"), "--m", "2"]) == 3


def test_bad_file_format(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("1,2\n3\n")
    assert main(["analyze", "--input", str(bad), "--m", "2"]) == 3


def test_missing_scale_is_usage_error():
    assert main(["analyze", "--input", str(DATA / "circle8.csv")]) == 2


def test_exclusive_scale_flags():
    with pytest.raises(SystemExit) as exc:
        main(["analyze", "--m", "2", "--epsilons", "0.5"])
    assert exc.value.code == 2


def test_unknown_flag():
    with pytest.raises(SystemExit) as exc:
        main(["verify", "--bogus"])
    assert exc.value.code == 2


def test_config_file_and_override(tmp_path):
    conf = tmp_path / "c.json"
    conf.write_text(json.dumps({"input": "x.csv", "m": 3, "s": 9.0, "kmax": 1}))
    args = build_parser().parse_args(["analyze", "--config", str(conf), "--epsilons", "0.5", "--s", "auto"])
    c = resolve_config(args)
    assert c.m is None and c.epsilons == [0.5]
    assert c.s is None and c.kmax == 1 and c.input == "x.csv"


def test_config_unknown_key(tmp_path):
    conf = tmp_path / "c.json"
    conf.write_text(json.dumps({"nonsense": 1}))
    assert main(["gates", "--config", str(conf)]) == 2


def test_config_not_json(tmp_path):
    conf = tmp_path / "c.json"
    conf.write_text("{")
    assert main(["gates", "--config", str(conf)]) == 3


def test_verify_mutation_fails(capsys):
    assert main(["verify", "--mutate-sign"]) == 1
    err = capsys.readouterr().err
    assert "FAIL chain-complex" in err and "PASS dirac-square" in err


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "cvtda", "--help"], capture_output=True, text=True)
    assert out.returncode == 0 and "analyze" in out.stdout
