import json
import math

import numpy as np
import pytest

from cvtda.errors import ConfigError
from cvtda.fixtures import all_fixtures, circle
from cvtda.geometry import PointCloud
from cvtda.pipeline import RunConfig, RunReport, run_pipeline


def cfg(**kw):
    kw.setdefault("epsilons", [0.8])
    return RunConfig(**kw)


class TestConfig:
    def test_needs_exactly_one_scale_source(self):
        with pytest.raises(ConfigError):
            RunConfig().validate()
        with pytest.raises(ConfigError):
            RunConfig(m=2, epsilons=[0.1]).validate()

    @pytest.mark.parametrize(
        "kw",
        [
            {"m": 0},
            {"epsilons": []},
            {"epsilons": [-1.0]},
            {"epsilons": [math.inf]},
            {"epsilons": [1.0], "mode": "both"},
            {"epsilons": [1.0], "samples": -1},
            {"epsilons": [1.0], "workers": 0},
            {"epsilons": [1.0], "s": 0.0},
            {"epsilons": [1.0], "gamma": -2.0},
        ],
    )
    def test_rejects(self, kw):
        with pytest.raises(ConfigError):
            RunConfig(**kw).validate()

    def test_kmax_range(self):
        with pytest.raises(ConfigError):
            cfg(kmax=3).validate(3)
        cfg(kmax=2).validate(3)

    def test_unknown_key(self):
        with pytest.raises(ConfigError):
            RunConfig.from_dict({"epsilon": [1.0]})

    def test_round_trip(self):
        c = cfg(kmax=2, s=4.0, seed=3)
        assert RunConfig.from_dict(json.loads(json.dumps(c.to_dict()))) == c

    def test_grid_from_m(self):
        assert RunConfig(m=2).grid() == [0.5, 1.0, 1.5]


def test_report_round_trip():
    rep = run_pipeline(cfg(), cloud=circle().cloud)
    back = RunReport.from_json(rep.dumps())
    assert back.to_json() == rep.to_json()


def test_deterministic():
    a = run_pipeline(cfg(epsilons=[0.5, 0.8, 1.5]), cloud=circle().cloud)
    b = run_pipeline(cfg(epsilons=[0.5, 0.8, 1.5]), cloud=circle().cloud)
    assert a.dumps() == b.dumps()


def test_workers_match_serial():
    a = run_pipeline(cfg(epsilons=[0.5, 0.8]), cloud=circle().cloud)
    b = run_pipeline(cfg(epsilons=[0.5, 0.8], workers=2), cloud=circle().cloud)
    assert a.records == b.records


def test_vertices_only():
    pc = PointCloud(np.array([[0.0, 0.0], [5.0, 0.0], [0.0, 5.0]]))
    rep = run_pipeline(cfg(epsilons=[1.0]), cloud=pc)
    assert rep.betti[0]["betti"] == [3, 0, 0]
    assert abs(rep.records[0]["beta_mixed"] - 3) <= 0.05


def test_circle_sweep_transition():
    rep = run_pipeline(cfg(epsilons=[0.5, 0.8, 2.1]), cloud=circle().cloud)
    betti = [b["betti"] for b in rep.betti]
    assert betti[0][:2] == [8, 0]
    assert betti[1][:2] == [1, 1]
    assert betti[2][:2] == [1, 0]


@pytest.mark.parametrize("fx", all_fixtures(), ids=lambda f: f.name)
def test_record_bounds(fx):
    rep = run_pipeline(cfg(epsilons=[fx.epsilon]), cloud=fx.cloud)
    for rec in rep.records:
        assert rec["beta_exact"] <= rec["size"]
        assert rec["beta_mixed"] >= 0 and rec["beta_pure"] >= 0
        assert rec["eigen_check"]


def test_pure_mode_and_sampling():
    rep = run_pipeline(cfg(mode="pure", samples=4000, seed=1), cloud=circle().cloud)
    rec = rep.records[1]
    assert rec["beta_estimate"] == rec["beta_pure"]
    # sampled fraction agrees with the analytic mass up to shot noise
    assert abs(rec["beta_sampled"] - rec["beta_pure"]) <= 0.5


def test_outputs_written(tmp_path):
    rep = run_pipeline(cfg(out=str(tmp_path)), cloud=circle().cloud)
    for name in ("report.json", "config.json", "timing.json"):
        assert (tmp_path / name).exists()
    assert json.loads((tmp_path / "report.json").read_text()) == json.loads(rep.dumps())
    table = (tmp_path / "dist_eps0.8_k1.tsv").read_text().splitlines()
    assert table[0] == "q_R\tP_mixed\tP_pure" and len(table) > 100


def test_missing_input():
    with pytest.raises(ConfigError):
        run_pipeline(cfg())


def test_file_input(tmp_path):
    path = tmp_path / "c.csv"
    np.savetxt(path, circle().cloud.coords, delimiter=",")
    rep = run_pipeline(cfg(input=str(path)))
    assert rep.betti[0]["betti"][:2] == [1, 1]
