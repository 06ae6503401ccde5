from pathlib import Path

import numpy as np
import pytest
import yaml

from relbell import TSIRELSON
from relbell.cli import EXIT_CONFIG, EXIT_IO, EXIT_NUMERIC, main, run
from relbell.config import ConfigError, ScenarioConfig

CONFIGS = Path(__file__).resolve().parents[1] / "configs"
SMALL = ["--grid-theta", "5", "--grid-phi", "5", "--theta-prime-max", "60"]


def read_csv(path):
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    assert lines[0].startswith("# relbell v1 ")
    header = lines[1].split(",")
    rows = [line.split(",") for line in lines[2:]]
    return header, rows


def small_cfg(scenario, **kw):
    base = dict(grid_theta=(0.0, 45.0, 90.0, 135.0, 180.0), grid_phi=(0.0, 90.0, 180.0, 270.0),
                theta_primes=(0.0, 60.0, 120.0, 180.0), speeds=(0.5, 0.99), betas=(0.0, 0.9),
                quadrature=(32, 64))
    base.update(kw)
    return ScenarioConfig(scenario, **base)


class TestConfig:
    @pytest.mark.parametrize("path", sorted(CONFIGS.glob("*.yaml")), ids=lambda p: p.stem)
    def test_shipped_configs_parse(self, path):
        cfg = ScenarioConfig.load(path)
        assert cfg.scenario == path.stem

    @pytest.mark.parametrize("scenario", ["sphere_sweep", "cone_sweep", "boosted_cone_sweep",
                                          "optimize", "compensate"])
    def test_round_trip(self, scenario):
        cfg = small_cfg(scenario, output_path="x.csv", cone_theta_prime=30.0)
        assert ScenarioConfig.loads(cfg.dumps()) == cfg
        assert ScenarioConfig.loads(cfg.dumps()).digest() == cfg.digest()

    def test_digest_ignores_output_path(self):
        a = small_cfg("cone_sweep", output_path="a.csv")
        b = small_cfg("cone_sweep", output_path="b.csv")
        assert a.digest() == b.digest()
        assert a.digest() != small_cfg("cone_sweep", speeds=(0.5,)).digest()

    def test_linspace_grid(self):
        cfg = ScenarioConfig.loads("scenario: sphere_sweep\ngrid_theta: {start: 0, stop: 90, num: 4}\n")
        assert cfg.grid_theta == (0.0, 30.0, 60.0, 90.0)

    @pytest.mark.parametrize("text", [
        "scenario: nope",
        "scenario: cone_sweep\nspeeds: [0.9, 0.5]",
        "scenario: cone_sweep\nspeeds: []",
        "scenario: cone_sweep\nspeeds: [1.0]",
        "scenario: sphere_sweep\nspeed_b: 1.2",
        "scenario: sphere_sweep\nbogus: 1",
        "scenario: sphere_sweep\nb1: [1, 1, 0]",
        "scenario: cone_sweep\ntheta_primes: [0, 200]",
        "scenario: cone_sweep\nquadrature: [8, 7]",
        "scenario: compensate\nv_com: [1, 0, 0]",
        "speed_b: 0.5",
        "- just a list",
        "scenario: [unclosed",
    ])
    def test_invalid(self, text):
        with pytest.raises(ConfigError):
            ScenarioConfig.loads(text)


class TestScenarios:
    def test_sphere_near_rest(self, tmp_path):
        out = tmp_path / "s.csv"
        assert main(["sphere-sweep", "--speed-b", "1e-9", "--grid-theta", "5", "--grid-phi", "5",
                     "--out", str(out)]) == 0
        header, rows = read_csv(out)
        assert header == ["theta_deg", "phi_deg", "S"]
        assert len(rows) == 25
        assert all(abs(float(r[2]) - TSIRELSON) < 1e-9 for r in rows)

    def test_sphere_pole_row(self):
        text = run(small_cfg("sphere_sweep"))
        row = text.splitlines()[2].split(",")
        assert row[:2] == ["0", "0"]
        assert abs(float(row[2]) - TSIRELSON) < 1e-10
        assert row[2] == "2.82842712475"

    def test_cone_sweep_pole_and_ordering(self):
        cfg = small_cfg("cone_sweep", theta_primes=(0.0, 1e-4 * 180 / np.pi, 45.0, 90.0, 180.0), quadrature=None)
        rows = [r.split(",") for r in run(cfg).splitlines()[2:]]
        by_speed = {}
        for sp, tp, lit, cor in rows:
            by_speed.setdefault(float(sp), []).append((float(tp), float(lit), float(cor)))
        for sp, curve in by_speed.items():
            assert abs(curve[0][1] - TSIRELSON) < 1e-10
            assert abs(curve[1][1] - TSIRELSON) < 1e-6
        slow, fast = by_speed[0.5], by_speed[0.99]
        assert all(s[1] >= f[1] for s, f in zip(slow, fast))

    def test_boosted_beta_zero_matches_cone_sweep(self):
        cone = run(small_cfg("cone_sweep", speeds=(0.99,)))
        boosted = run(small_cfg("boosted_cone_sweep", speed_b=0.99))
        cone_vals = [r.split(",")[2:] for r in cone.splitlines()[2:]]
        boosted_rows = [r.split(",") for r in boosted.splitlines()[2:]]
        beta0 = [r[2:] for r in boosted_rows if r[0] == "0"]
        assert beta0 == cone_vals
        assert any(float(r[2]) < 2 for r in boosted_rows if r[0] == "0.9")

    def test_optimize(self):
        cfg = small_cfg("optimize", directions=((90.0, 0.0), (30.0, 200.0)))
        rows = [r.split(",") for r in run(cfg).splitlines()[2:]]
        assert len(rows) == 2
        for r in rows:
            assert float(r[3]) >= TSIRELSON - 1e-6
            assert r[-1] == "1"

    def test_compensate_residuals(self, tmp_path):
        out = tmp_path / "c.csv"
        assert main(["compensate", "--config", str(CONFIGS / "compensate.yaml"), "--out", str(out)]) == 0
        header, rows = read_csv(out)
        assert header[-1] == "residual"
        assert all(float(r[-1]) <= 1e-9 for r in rows)

    def test_compensate_at_rest_is_identity(self):
        cfg = small_cfg("compensate")
        for r in run(cfg).splitlines()[2:]:
            vals = [float(x) for x in r.split(",")]
            np.testing.assert_allclose(vals[0:3], vals[3:6], atol=1e-12)

    def test_emitted_s_within_bound(self):
        for scen in ("sphere_sweep", "cone_sweep", "boosted_cone_sweep"):
            for r in run(small_cfg(scen)).splitlines()[2:]:
                for x in r.split(",")[2:]:
                    assert 0 <= float(x) <= TSIRELSON + 1e-9

    def test_workers_do_not_change_output(self):
        cfg = small_cfg("cone_sweep")
        assert run(cfg, workers=1) == run(cfg, workers=3)


class TestExitCodes:
    def test_non_orthogonal_target(self, tmp_path, capsys):
        cfg = tmp_path / "c.yaml"
        cfg.write_text(yaml.safe_dump({"scenario": "compensate", "beta": 0.5,
                                       "v_com": [0.5, 0, 0], "targets": [[0, 0, 1]]}))
        assert main(["compensate", "--config", str(cfg)]) == EXIT_CONFIG
        assert "not orthogonal" in capsys.readouterr().err

    def test_bad_config(self, tmp_path):
        cfg = tmp_path / "c.yaml"
        cfg.write_text("scenario: cone_sweep\nspeeds: [2]\n")
        assert main(["cone-sweep", "--config", str(cfg)]) == EXIT_CONFIG

    def test_scenario_mismatch(self):
        assert main(["cone-sweep", "--config", str(CONFIGS / "optimize.yaml")]) == EXIT_CONFIG

    def test_unwritable_output(self, tmp_path, capsys):
        out = tmp_path / "missing" / "x.csv"
        assert main(["compensate", "--out", str(out)]) == EXIT_IO
        assert str(out) in capsys.readouterr().err

    def test_missing_config(self, tmp_path):
        assert main(["compensate", "--config", str(tmp_path / "nope.yaml")]) == EXIT_IO

    def test_singular(self, monkeypatch):
        import relbell.solvers as solvers
        monkeypatch.setattr(solvers, "MAX_CONDITION", 0.5)
        assert main(["compensate", "--beta", "0.5"]) == EXIT_NUMERIC


def test_output_format(tmp_path):
    out = tmp_path / "s.csv"
    main(["sphere-sweep", "--grid-theta", "3", "--grid-phi", "3", "--out", str(out)])
    raw = out.read_bytes()
    assert b"\r" not in raw
    raw.decode("utf-8")
    for line in raw.decode().splitlines()[2:]:
        for field in line.split(","):
            assert len(field.replace("-", "").replace(".", "").lstrip("0").split("e")[0]) <= 12
