import csv
import io
import json
import math

import numpy as np
import pytest

from hullbound import cli
from hullbound.cheb import MonicConstraint, membership_numeric, minimax
from hullbound.exact import PointConfiguration, membership_exact
from hullbound.poly import monomial_basis
from hullbound.report import dumps, loads, solution_from_json, solution_to_json, verdict_from_json, verdict_to_json
from hullbound.sets import finite_set, sample

from conftest import roots


def _run(argv, capsys):
    code = cli.run(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_dumps_is_stable_and_round_trips():
    obj = {"a": 0.1, "b": [1 + 2j, np.float64(1 / 3)], "c": math.inf, "d": np.arange(3), "e": True}
    text = dumps(obj)
    assert text == dumps(obj)
    back = loads(text)
    assert back["a"] == 0.1 and back["b"][0] == [1.0, 2.0] and back["b"][1] == 1 / 3
    assert back["c"] is None and back["d"] == [0, 1, 2] and back["e"] is True
    # 17 significant digits reproduce every double exactly
    for x in np.random.default_rng(1).normal(size=200) * 10.0 ** np.arange(-100, 100):
        assert loads(dumps([float(x)]))[0] == x


def test_verdict_round_trip():
    v = membership_exact(PointConfiguration(roots(4)), 0.1j)
    back = verdict_from_json(loads(dumps(verdict_to_json(v))))
    assert back.status == v.status and back.w == v.w and back.residual == v.residual
    K = sample("arc alpha=1.0 N=300")
    v = membership_numeric(K, 0.2, 2)
    assert v.certificate is not None
    back = verdict_from_json(loads(dumps(v)))
    assert back.status == v.status and back.value == v.value
    assert back.certificate(0.2) == pytest.approx(v.certificate(0.2), abs=1e-15)


def test_solution_round_trip():
    sol = minimax(finite_set(roots(5)), monomial_basis(1, 3), MonicConstraint())
    back = solution_from_json(loads(dumps(solution_to_json(sol))))
    assert back.value == sol.value and back.basis == sol.basis
    np.testing.assert_array_equal(back.coefficients, sol.coefficients)
    assert back.active_points == sol.active_points and back.box_active == sol.box_active


def test_cli_points_and_determinism(capsys, tmp_path):
    pts = json.dumps([[1, 0], [0, 1], [-1, 0], [0, -1]])
    code, out1, _ = _run(["points", "--points", pts, "--w", "[0.1, 0.2]"], capsys)
    assert code == 0
    code, out2, _ = _run(["points", "--points", pts, "--w", "[0.1, 0.2]"], capsys)
    assert out1 == out2
    rep = json.loads(out1)
    assert rep["verdict"]["status"] in ("member", "non-member")
    out = tmp_path / "r.json"
    assert cli.run(["points", "--points", pts, "--out", str(out)]) == 0
    code, stdout, _ = _run(["points", "--points", pts], capsys)
    assert out.read_text() == stdout


def test_cli_grid_csv_schema_and_determinism(capsys, tmp_path):
    pts = tmp_path / "roots5.json"
    pts.write_text(json.dumps([[z.real, z.imag] for z in roots(5)]))
    paths = [tmp_path / "a.csv", tmp_path / "b.csv"]
    for p in paths:
        code, _, _ = _run(["grid", "--points-file", str(pts), "--degree", "2", "--bbox", "-1.2", "1.2",
                           "--res", "9", "--csv", str(p)], capsys)
        assert code == 0
    assert paths[0].read_bytes() == paths[1].read_bytes()
    rows = list(csv.reader(io.StringIO(paths[0].read_text())))
    assert rows[0] == ["x", "y", "value", "status"]
    assert len(rows) == 1 + 81
    assert {r[3] for r in rows[1:]} <= {"member", "borderline", "non-member"}


def test_cli_usage_errors(capsys):
    assert _run([], capsys)[0] == 1
    assert _run(["nope"], capsys)[0] == 1
    assert _run(["points"], capsys)[0] == 1
    assert _run(["points", "--points", "[[1, 0], [2"], capsys)[0] == 1
    assert _run(["knot", "--p", "2", "--q", "2"], capsys)[0] == 1
    code, _, err = _run(["separate2", "--point", "[[0, 0], [0, 0]]", "--set", "arc alpha=1 N=20"], capsys)
    assert code == 1 and "inconsistent dimensions" in err
    assert _run(["grid", "--points", "[[0, 0]]", "--res", "1"], capsys)[0] == 1
    assert _run(["arc", "--n", "2", "--alpha", "3", "--r", "0.5"], capsys)[0] == 1


def test_cli_exit_code_two_on_failed_recheck(capsys, monkeypatch):
    code, out, _ = _run(["knot", "--p", "2", "--q", "1", "--degree", "3", "--N", "400"], capsys)
    assert code == 0 and json.loads(out)["certificate"]["sup_resample"] < 1
    monkeypatch.setattr(cli, "verify_certificate", lambda *a, **k: (False, {"forced": True}))
    code, out, _ = _run(["knot", "--p", "2", "--q", "1", "--degree", "3", "--N", "400"], capsys)
    assert code == 2
    assert "error" in json.loads(out)


def test_cli_knot_report_schema(capsys):
    code, out, _ = _run(["knot", "--p", "2", "--q", "1", "--degree", "2", "--N", "400"], capsys)
    rep = json.loads(out)
    assert code == 0
    assert set(rep) == {"p", "q", "degree", "value", "N", "L", "certificate"}
    assert rep["certificate"] is None and rep["value"] >= 0.999


def test_config_precedence(capsys, tmp_path):
    conf = tmp_path / "c.json"
    conf.write_text(json.dumps({"p": 3, "q": 2, "degree": 4, "N": 300}))
    code, out, _ = _run(["knot", "--config", str(conf)], capsys)
    rep = json.loads(out)
    assert code == 0 and (rep["p"], rep["q"], rep["degree"], rep["N"]) == (3, 2, 4, 300)
    code, out, _ = _run(["knot", "--config", str(conf), "--degree", "5"], capsys)
    rep = json.loads(out)
    assert rep["degree"] == 5 and rep["p"] == 3 and rep["certificate"] is not None
    bad = tmp_path / "bad.json"
    bad.write_text("[1, 2]")
    assert _run(["knot", "--config", str(bad)], capsys)[0] == 1


def test_cli_other_commands(capsys, tmp_path):
    code, out, _ = _run(["circle-points", "--angles", json.dumps(list(2 * np.pi * np.arange(4) / 4))], capsys)
    assert code == 0 and max(map(abs, json.loads(out)["hull_point"])) < 1e-12
    code, out, _ = _run(["cheb", "--degree", "4"], capsys)
    assert code == 0 and json.loads(out)["passes"]
    code, out, _ = _run(["pathological", "--n-max", "3", "--svg", str(tmp_path / "p.svg")], capsys)
    assert code == 0 and json.loads(out)["all_member"] and (tmp_path / "p.svg").read_text().startswith("<svg")
    code, out, _ = _run(["jacobian", "--n", "4", "--count", "5", "--seed", "3"], capsys)
    assert code == 0 and json.loads(out)["max_relative_error"] < 1e-6
    code, out, _ = _run(["family", "--p", "3", "--N", "500"], capsys)
    assert code == 0 and json.loads(out)["witness"]
    code, out, _ = _run(["arc", "--n", "3", "--alpha", "2.8"], capsys)
    assert code == 0 and json.loads(out)["witness"]["numeric"]["value"] >= 1 - 5e-3
    code, out, _ = _run(["separate2", "--point", "[[1, 0], [0, 1]]"], capsys)
    assert code == 0 and json.loads(out)["abs_at_point"] > json.loads(out)["sup_resample"]
