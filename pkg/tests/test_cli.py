import csv
import json

import pytest

from wsnbundle.cli import main
from wsnbundle.errors import ConfigError
from wsnbundle.scenario import load_scenario, parse_scenario

from .helpers import S

BASE = {
    "version": 1,
    "topology": [[1, 0], [2, 1], [3, 1], [4, 2]],
    "duration_s": 60,
    "requirement_schedule": [{"at_s": 5, "d_e2e_max_s": 8, "sa_min_s": 0.000005, "chi_max": 15}],
}


def scenario(tmp_path, **over):
    data = {**BASE, **over}
    p = tmp_path / "s.json"
    p.write_text(json.dumps(data, indent=2))
    return p


def test_presets_load():
    s = load_scenario("src/wsnbundle/presets/static_8s.json")
    assert s.duration == 3600 * S and s.start_gamma == 15
    d = load_scenario("src/wsnbundle/presets/dynamic_8to2.json")
    assert [r.d_e2e_max for _, r in d.schedule] == [8 * S, 6 * S, 4 * S, 2 * S]


def test_decimal_seconds_are_exact():
    cfg = parse_scenario(json.dumps({**BASE, "i_meas_s": 0.1, "duration_s": 0.3,
                                     "requirement_schedule": []}))
    assert cfg.i_meas == 100_000 and cfg.duration == 300_000


@pytest.mark.parametrize("over, field, key", [
    ({"colour": 1}, "colour", "colour"),
    ({"version": 2}, "version", "version"),
    ({"duration_s": 0}, "duration", "duration_s"),
    ({"bundling_mode": "some"}, "bundling_mode", "bundling_mode"),
    ({"energy": {"e_meas": -1}}, "energy", "energy"),
    ({"service": {"d_spi": 1}}, "service.d_spi", "d_spi"),
])
def test_rejections_name_field_and_line(over, field, key):
    text = json.dumps({**BASE, **over}, indent=1)
    with pytest.raises(ConfigError) as info:
        parse_scenario(text)
    assert info.value.field == field
    key_line = next(i for i, l in enumerate(text.splitlines(), 1) if f'"{key}":' in l)
    assert info.value.line == key_line


def test_optimize_prints_objective(tmp_path, capsys):
    assert main(["optimize", str(scenario(tmp_path)), "--dump-constraints"]) == 0
    out = capsys.readouterr().out
    assert "objective: 26" in out and "1*G4 + 1/2*G2 + 1/4*G1 <= 8" in out
    assert "node 2: gamma=6" in out


def test_optimize_brute_force_and_preset(capsys):
    assert main(["optimize", "dynamic_8to2.json", "--step", "3", "--brute-force"]) == 0
    assert "objective: 5" in capsys.readouterr().out


def test_optimize_infeasible_exit_2(tmp_path, capsys):
    sched = [{"at_s": 0, "d_e2e_max_s": 0.5, "sa_min_s": 0.000005, "chi_max": 15}]
    assert main(["optimize", str(scenario(tmp_path, requirement_schedule=sched))]) == 2
    assert "node 4" in capsys.readouterr().err


def test_optimize_malformed_exit_1(tmp_path, capsys):
    p = tmp_path / "bad.json"
    p.write_text("{\n  \"version\": 1,\n")
    assert main(["optimize", str(p)]) == 1
    assert "line" in capsys.readouterr().err
    assert main(["optimize", str(tmp_path / "missing.json")]) == 1


def test_simulate_writes_outputs(tmp_path):
    out = tmp_path / "out"
    assert main(["simulate", str(scenario(tmp_path)), str(out)]) == 0
    names = {p.name for p in out.iterdir()}
    assert names == {"delays.csv", "messages.csv", "energy.csv", "plan_history.csv", "summary.json"}
    with open(out / "delays.csv") as fh:
        assert next(csv.reader(fh)) == ["arrival_s", "origin", "e2e_s"]
    summary = json.loads((out / "summary.json").read_text())
    assert summary["baseline_energy_total"] > summary["energy_total"]


def test_simulate_rejects_zero_duration(tmp_path):
    assert main(["simulate", str(scenario(tmp_path, duration_s=0)), str(tmp_path / "o")]) == 1


def test_sweep_d_e2e_max(tmp_path):
    out = tmp_path / "sweep.csv"
    assert main(["sweep", str(scenario(tmp_path)), "--axis", "d_e2e_max",
                 "--values", "8", "6", "4", "2", "--out", str(out)]) == 0
    rows = list(csv.DictReader(open(out)))
    objectives = [int(r["objective"]) for r in rows]
    assert objectives == sorted(objectives, reverse=True) and objectives[0] == 26


def test_sweep_si_trend(tmp_path):
    out = tmp_path / "si.csv"
    assert main(["sweep", str(scenario(tmp_path)), "--axis", "si", "--values", "100", "10", "1",
                 "--seeds", "6", "--out", str(out)]) == 0
    med = [float(r["median_sync_error_us"]) for r in csv.DictReader(open(out))]
    assert med[0] >= med[1] >= med[2]


@pytest.mark.parametrize("argv", [
    ["--axis", "colour", "--values", "1"],
    ["--axis", "si", "--values"],
    ["--axis", "si"],
    ["--axis", "chi_max", "--values", "2.5"],
])
def test_sweep_rejections(tmp_path, argv):
    assert main(["sweep", str(scenario(tmp_path)), *argv]) == 1


def test_usage_error_is_exit_1():
    with pytest.raises(SystemExit) as info:
        main(["frobnicate"])
    assert info.value.code == 1
