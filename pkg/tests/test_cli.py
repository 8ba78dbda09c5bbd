import csv
import io
import json
from pathlib import Path

import pytest
from hypothesis import given, strategies as st

from neutral_lame.cli_io import main
from neutral_lame.cli_io.records import csv_text, format_float, jsonable
from neutral_lame.cli_io.scenario import (ParseError, ScenarioError, parse_scenario,
                                          scenario_digest, serialize_scenario)

SCENARIOS = Path(__file__).resolve().parents[1] / "scenarios"

MINIMAL_CONDUCTOR = json.dumps({
    "geometry": {"disks": {"r1": 1.0, "r2": 2.0}},
    "phases": {"core": {"sigma": 5.0}, "shell": {"sigma": 1.0}, "matrix": {"sigma": 1.4}},
    "load": {"field": [1.0, 0.0]},
})


def test_defaults_filled():
    sc = parse_scenario(MINIMAL_CONDUCTOR)
    assert sc.numerics.order == 8 and sc.numerics.nodes == 256
    assert sc.radii == (4.0, 8.0)
    assert sc.phase_kind == "conductor"


def test_all_violations_reported():
    doc = json.loads(MINIMAL_CONDUCTOR)
    doc["geometry"]["disks"]["r1"] = 3.0
    doc["phases"]["core"] = {"mu": 1.0, "kappa": 2.0}
    with pytest.raises(ScenarioError) as info:
        parse_scenario(json.dumps(doc))
    paths = [p for p, _ in info.value.violations]
    assert "geometry.disks.r1" in paths
    assert any(p.startswith("phases") for p in paths)
    assert len(paths) >= 2


def test_parse_error_position():
    with pytest.raises(ParseError) as info:
        parse_scenario('{\n  "geometry": {"disks": {"r1": 1,}}\n}')
    assert info.value.line == 2 and info.value.column > 1


@pytest.mark.parametrize("name", sorted(p.name for p in SCENARIOS.glob("*.json")))
def test_round_trip(name):
    sc = parse_scenario((SCENARIOS / name).read_text())
    text = serialize_scenario(sc)
    again = parse_scenario(text)
    assert again == sc
    assert serialize_scenario(again) == text
    assert scenario_digest(again) == scenario_digest(sc)


def test_overrides_change_digest():
    sc = parse_scenario((SCENARIOS / "elastic_template.json").read_text())
    assert scenario_digest(sc.with_overrides(nodes=64)) != scenario_digest(sc)
    assert sc.with_overrides(order=5).numerics.order == 5


finite = st.floats(allow_nan=False, allow_infinity=False)


@given(st.lists(finite, min_size=1, max_size=6))
def test_csv_floats_round_trip_exactly(values):
    text = csv_text([f"c{i}" for i in range(len(values))], [values])
    row = list(csv.reader(io.StringIO(text)))[1]
    assert [float(v) for v in row] == values


@given(finite)
def test_format_float_shortest(x):
    s = format_float(x)
    assert float(s) == x
    digits = s.split("e")[0].lstrip("-").replace(".", "").strip("0") or "0"
    fewest = next(k for k in range(1, 18) if float(f"{x:.{k}g}") == x)
    # never longer than the shortest correctly rounded form that round-trips
    assert len(digits) <= fewest


def test_jsonable_complex_and_nonfinite():
    assert jsonable({"c": 1 + 2j, "n": float("nan")}) == {"c": [1.0, 2.0], "n": "nan"}


def _run(tmp_path, *argv, capsys=None):
    code = main(list(argv) + ["--out", str(tmp_path), "--quiet"])
    return code


def _record(tmp_path, command):
    lines = (tmp_path / f"{command}.jsonl").read_text().splitlines()
    return json.loads(lines[-1])


def test_check_neutral_conductor_record(tmp_path, capsys):
    code = _run(tmp_path, "check-neutral", "--scenario", str(SCENARIOS / "conductor_neutral.json"))
    assert code == 0
    out = capsys.readouterr().out
    rec = json.loads(out)
    assert rec == _record(tmp_path, "check-neutral")
    assert abs(rec["outputs"]["residual"]) <= 1e-12
    assert rec["scenario_digest"] and rec["tool_version"]


def test_solve_bem_homogeneous(tmp_path):
    assert _run(tmp_path, "solve-bem", "--scenario", str(SCENARIOS / "homogeneous.json")) == 0
    assert _record(tmp_path, "solve-bem")["outputs"]["gap"] < 1e-9


def test_find_neutral_no_sign_change(tmp_path):
    code = _run(tmp_path, "find-neutral", "--scenario", str(SCENARIOS / "no_sign_change.json"))
    assert code == 3
    rec = _record(tmp_path, "find-neutral")
    assert rec["status"] == "failed" and len(rec["outputs"]["scan"]) == 16
    rows = list(csv.reader(open(tmp_path / "find-neutral.csv")))
    assert rows[0] == ["kappa_m", "objective"] and len(rows) == 17


def test_find_neutral_elastic(tmp_path):
    assert _run(tmp_path, "find-neutral", "--scenario", str(SCENARIOS / "elastic_template.json")) == 0
    out = _record(tmp_path, "find-neutral")["outputs"]
    assert out["root"] == pytest.approx(5 / 3, rel=1e-12) and out["gap"] < 1e-10


def test_validation_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(MINIMAL_CONDUCTOR.replace('"r1": 1.0', '"r1": 5.0'))
    assert _run(tmp_path, "solve-disk", "--scenario", str(bad)) == 2
    assert "geometry.disks.r1" in capsys.readouterr().err
    assert _run(tmp_path, "solve-bem", "--scenario", str(SCENARIOS / "conductor_neutral.json")) == 2
    assert _run(tmp_path, "solve-disk", "--scenario", str(tmp_path / "missing.json")) == 2


def test_sweep_csv_layout(tmp_path):
    assert _run(tmp_path, "shear-sweep", "--scenario", str(SCENARIOS / "shear_small.json")) == 0
    rows = list(csv.reader(open(tmp_path / "shear-sweep.csv")))
    assert rows[0] == ["rho", "mu_c", "mu_m", "abs_c1", "abs_c3", "max_abs"]
    assert len(rows) == 1 + 4 * 3 * 3
    keys = [tuple(map(float, r[:3])) for r in rows[1:]]
    assert keys == sorted(keys)


@pytest.mark.parametrize("command,scenario,extra", [
    ("shear-sweep", "shear_small.json", ["--root-curve"]),
    ("find-neutral", "elastic_template.json", []),
    ("solve-bem", "perturbed_m3.json", ["--nodes", "64"]),
])
def test_byte_identical_reruns(tmp_path, command, scenario, extra):
    outs = []
    for run in ("a", "b"):
        d = tmp_path / run
        assert main([command, "--scenario", str(SCENARIOS / scenario), "--out", str(d),
                     "--quiet"] + extra) == 0
        outs.append({p.name: p.read_bytes() for p in sorted(d.iterdir())})
    assert outs[0] == outs[1]
    assert any(name.endswith(".jsonl") for name in outs[0])


def test_records_append(tmp_path):
    for _ in range(2):
        _run(tmp_path, "solve-disk", "--scenario", str(SCENARIOS / "conductor_neutral.json"))
    lines = (tmp_path / "solve-disk.jsonl").read_text().splitlines()
    assert len(lines) == 2 and lines[0] == lines[1]
