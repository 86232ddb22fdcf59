import csv
import json
import math

import numpy as np
import pytest

from driven_jcm import cli, verify
from driven_jcm.presets import PRESETS, get_preset


def _rows(path):
    with open(path, newline="") as fh:
        return list(csv.reader(fh))


def test_parse_complex():
    assert cli.parse_complex("1+0.5i") == 1 + 0.5j
    assert cli.parse_complex("-2i") == -2j
    assert cli.parse_complex("i") == 1j
    assert cli.parse_complex("3") == 3
    assert cli.parse_complex(2.5) == 2.5
    for bad in ("abc", "nan", "1+infi"):
        with pytest.raises(cli.ConfigError):
            cli.parse_complex(bad)


def test_parse_grid():
    g = cli.parse_grid("-10:4:15,-7:7:29")
    assert (g.q_min, g.q_max, g.n_q, g.p_min, g.p_max, g.n_p) == (-10, 4, 15, -7, 7, 29)
    for bad in ("1:2:3", "a:b:c,1:2:3", "0:1:1,0:1:5"):
        with pytest.raises(cli.ConfigError):
            cli.parse_grid(bad)


def test_inversion_command(tmp_path):
    out = tmp_path / "inv"
    rc = cli.main(["inversion", "--state", "even", "--alpha", "1", "--beta", "2",
                   "--eps-a", str(3 / math.sqrt(10)), "--eps-b", str(1 / math.sqrt(10)),
                   "--t-grid", "0:20:21", "--out", str(out)])
    assert rc == 0
    rows = _rows(out.with_suffix(".csv"))
    assert rows[0] == ["kappa_eff_t", "inversion"]
    assert rows[1] == ["0", "1"]
    assert len(rows) == 22
    meta = json.loads(out.with_suffix(".json").read_text())
    assert meta["state"] == "even" and "version" in meta
    assert (tmp_path / "inv_plot.py").exists()


def test_kappa_flags_and_time_units(tmp_path):
    out = tmp_path / "inv"
    cli.main(["inversion", "--alpha", "0", "--beta", "0", "--kappa-a", "1.2", "--kappa-b", "1.6",
              "--t-grid", "0:3:4", "--out", str(out), "--no-plot"])
    rows = _rows(out.with_suffix(".csv"))[1:]
    kt = np.array([float(r[0]) for r in rows])
    vals = np.array([float(r[1]) for r in rows])
    assert np.allclose(vals, np.cos(2 * kt), atol=1e-14)


def test_wigner_json_format(tmp_path):
    out = tmp_path / "w"
    rc = cli.main(["wigner", "--state", "odd", "--alpha", "1", "--beta", "2", "--t", "5",
                   "--grid", "-3:3:9,-3:3:9", "--format", "json", "--out", str(out)])
    assert rc == 0
    payload = json.loads(out.with_suffix(".json").read_text())
    assert len(payload["data"]["W"]) == 81
    assert payload["meta"]["max_imag_residue"] < 1e-9
    assert payload["meta"]["min_W"] <= payload["meta"]["max_W"]


def test_marginal_normalized(tmp_path):
    out = tmp_path / "m"
    cli.main(["marginal", "--alpha", "1", "--beta", "2", "--t", "0", "--points", "-8:8:401",
              "--normalized-marginals", "--out", str(out)])
    rows = _rows(out.with_suffix(".csv"))[1:]
    x = np.array([float(r[0]) for r in rows])
    y = np.array([float(r[1]) for r in rows])
    assert np.trapezoid(y, x) == pytest.approx(1.0, abs=1e-6)
    meta = json.loads(out.with_suffix(".json").read_text())
    assert meta["normalization"] == "unit"


def test_marginal_cat_via_surface(tmp_path):
    out = tmp_path / "m"
    rc = cli.main(["marginal", "--state", "even", "--alpha", "1", "--beta", "1", "--t", "2",
                   "--grid", "-6:6:41,-6:6:41", "--axis", "p", "--out", str(out)])
    assert rc == 0
    assert json.loads(out.with_suffix(".json").read_text())["source"] == "surface"


def test_chi_command(tmp_path):
    out = tmp_path / "chi"
    cli.main(["chi", "--alpha", "0.5", "--beta", "1", "--t", "3", "--grid", "-1:1:3,-1:1:3",
              "--out", str(out)])
    rows = _rows(out.with_suffix(".csv"))
    centre = rows[1 + 4]
    assert float(centre[2]) == pytest.approx(1.0, abs=1e-14)


def test_yaml_config_and_override(tmp_path):
    cfg = tmp_path / "run.yaml"
    cfg.write_text("state: odd\nalpha: 1\nparams:\n  eps-a: 0.8\n  eps-b: 0.6\n  delta_over_keff: 6\n"
                   "t_grid: '0:10:11'\n")
    ns = cli.make_parser().parse_args(["inversion", "--config", str(cfg), "--beta", "3"])
    rc = cli.build_config(ns)
    assert rc.cavity.kind == "odd"
    assert rc.drive.beta == 3
    assert rc.params.eps_a == pytest.approx(0.8)
    assert rc.params.delta == pytest.approx(6.0)
    ns = cli.make_parser().parse_args(["inversion", "--config", str(cfg), "--state", "even"])
    assert cli.build_config(ns).cavity.kind == "even"
    bad = tmp_path / "bad.yaml"
    bad.write_text("colour: red\n")
    ns = cli.make_parser().parse_args(["inversion", "--config", str(bad)])
    with pytest.raises(cli.ConfigError):
        cli.build_config(ns)


def test_rejections(capsys):
    assert cli.main(["wigner", "--state", "odd", "--alpha", "0", "--t", "1"]) == 2
    assert cli.main(["inversion", "--eps-a", "1", "--kappa-a", "1", "--t", "1"]) == 2
    assert cli.main(["wigner", "--t-grid", "0:1:3"]) == 2
    assert "error" in capsys.readouterr().err


def test_stdout_when_no_out(capsys):
    assert cli.main(["inversion", "--t", "0"]) == 0
    assert capsys.readouterr().out.splitlines()[1] == "0,1"


def test_presets_complete():
    names = {f"fig{f}{p}" for f in range(2, 7) for p in "abcd"}
    assert set(PRESETS) == names
    assert not get_preset("fig2c").oracle_available and get_preset("fig3a").oracle_available
    with pytest.raises(KeyError):
        get_preset("fig9z")


def test_preset_rerun_identical(tmp_path):
    for run in ("a", "b"):
        cli.main(["preset", "fig3b", "--out", str(tmp_path / run)])
    for name in ("fig3b.csv", "fig3b.json", "fig3b_plot.py"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_verify_exit_codes(monkeypatch, tmp_path):
    assert cli.main(["verify", "--out", str(tmp_path / "r.json")]) == 0
    assert json.loads((tmp_path / "r.json").read_text())["passed"] is True
    monkeypatch.setattr(verify, "run_checks", lambda quick=True: {"passed": False, "checks": []})
    assert cli.main(["verify"]) == 1
