import json
import os
import subprocess
import sys

import numpy as np

from solvharm.cli import build_report, main
from solvharm.clifford_dr import build_damek_ricci, clifford_generators
from solvharm.lie_metric import algebra_to_dict


def _run(argv, **kwargs):
    return subprocess.run(
        [sys.executable, "-m", "solvharm.cli", *argv],
        capture_output=True, text=True, **kwargs
    )


def test_build_writes_deterministic_json(tmp_path):
    out1 = tmp_path / "a.json"
    out2 = tmp_path / "b.json"
    assert main(["build", "damek-ricci", "--l", "1", "--copies", "1",
                 "--output", str(out1)]) == 0
    assert main(["build", "damek-ricci", "--l", "1", "--copies", "1",
                 "--output", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()
    data = json.loads(out1.read_text())
    assert data["dim"] == 4
    assert all(i < j for i, j, _, _ in data["structure_constants"])


def test_build_flat(tmp_path):
    out = tmp_path / "flat.json"
    assert main(["build", "flat", "--dim", "3", "--output", str(out)]) == 0
    data = json.loads(out.read_text())
    assert data == {"dim": 3, "structure_constants": []}


def test_analyze_deterministic(tmp_path):
    alg = tmp_path / "dr.json"
    main(["build", "damek-ricci", "--l", "1", "--output", str(alg)])
    r1 = tmp_path / "r1.json"
    r2 = tmp_path / "r2.json"
    assert main(["analyze", str(alg), "--seed", "3",
                 "--output", str(r1)]) == 0
    assert main(["analyze", str(alg), "--seed", "3",
                 "--output", str(r2)]) == 0
    assert r1.read_bytes() == r2.read_bytes()
    report = json.loads(r1.read_text())
    assert report["classification"] == "RankOneSymmetric"
    assert report["seed"] == 3
    assert "tolerances" in report


def test_analyze_malformed_exit_2(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["analyze", str(bad)]) == 2
    missing = tmp_path / "missing.json"
    assert main(["analyze", str(missing)]) == 2


def test_analyze_perturbed_label(tmp_path):
    from solvharm.lie_metric import MetricLieAlgebra
    g = MetricLieAlgebra(4, ((0, 1, 1, 0.5), (0, 2, 2, 0.5),
                             (0, 3, 3, 1.0), (1, 2, 3, 0.8)))
    alg = tmp_path / "perturbed.json"
    alg.write_text(json.dumps(algebra_to_dict(g)))
    out = tmp_path / "rep.json"
    assert main(["analyze", str(alg), "--output", str(out)]) == 0
    report = json.loads(out.read_text())
    assert report["classification"] == "NotAsymptoticallyHarmonic"
    assert report["h_scan"]["constant"] is False


def test_analyze_flat_motion_group(tmp_path):
    # non-abelian presentation of a flat space: [H, X] = Y, [H, Y] = -X
    from solvharm.lie_metric import MetricLieAlgebra
    g = MetricLieAlgebra(3, ((0, 1, 2, 1.0), (0, 2, 1, -1.0)))
    report = build_report(g)
    assert report["classification"] == "Flat"
    assert report["curvature"]["norm"] == 0.0
    assert report["growth"] == "subexponential"


def test_analyze_not_standard_is_indeterminate(tmp_path):
    alg = tmp_path / "heis.json"
    main(["build", "heisenberg", "--l", "1", "--output", str(alg)])
    out = tmp_path / "rep.json"
    assert main(["analyze", str(alg), "--output", str(out)]) == 0
    report = json.loads(out.read_text())
    assert report["classification"] == "Indeterminate"
    assert report["standard_decomposition"]["status"] == "not-standard"


def test_analyze_density_sidecar(tmp_path):
    alg = tmp_path / "dr.json"
    main(["build", "damek-ricci", "--l", "1", "--output", str(alg)])
    csv = tmp_path / "density.csv"
    env = dict(os.environ, SOLVHARM_THREADS="2")
    res = subprocess.run(
        [sys.executable, "-m", "solvharm.cli", "analyze", str(alg),
         "--density-csv", str(csv), "--density-directions", "4",
         "--density-times", "0.5,1"],
        capture_output=True, text=True, env=env,
    )
    assert res.returncode == 0
    lines = csv.read_text().strip().splitlines()
    assert lines[0] == "direction_id,t,det"
    assert len(lines) == 1 + 4 * 2
    dets = {}
    for line in lines[1:]:
        i, t, det = line.split(",")
        dets.setdefault(t, []).append(float(det))
    for values in dets.values():
        assert np.ptp(values) <= 1e-8 * max(values)


def test_scan_h_not_standard_exit_3(tmp_path):
    alg = tmp_path / "heis.json"
    main(["build", "heisenberg", "--l", "1", "--output", str(alg)])
    assert main(["scan-h", str(alg)]) == 3


def test_scan_h_csv(tmp_path, capsys):
    alg = tmp_path / "dr.json"
    main(["build", "damek-ricci", "--l", "1", "--output", str(alg)])
    out = tmp_path / "h.csv"
    assert main(["scan-h", str(alg), "--count", "10",
                 "--output", str(out)]) == 0
    lines = out.read_text().strip().splitlines()
    assert lines[0].startswith("z,h,factor_1")
    values = [float(line.split(",")[1]) for line in lines[1:]]
    assert np.abs(np.array(values) + 4.0).max() <= 1e-9


def test_classify_reports_factors(tmp_path):
    alg = tmp_path / "dr.json"
    main(["build", "damek-ricci", "--l", "2", "--output", str(alg)])
    out = tmp_path / "cls.json"
    assert main(["classify", str(alg), "--output", str(out)]) == 0
    report = json.loads(out.read_text())
    assert report["is_rigid"] is True
    labels = {f["label"] for f in report["factors"]}
    assert labels <= {"constant", "polynomial"}


def test_riccati_report(tmp_path):
    mat = tmp_path / "m.json"
    mat.write_text('{"matrix": [[0.5, 0, 0], [0, 0.5, 0], [0, 0, 1.0]]}')
    out = tmp_path / "r.json"
    assert main(["riccati", str(mat), "--output", str(out)]) == 0
    report = json.loads(out.read_text())
    assert np.isclose(report["trace_l0"], -2.0)
    assert np.isclose(report["formula_trace"], -2.0)
    assert np.allclose(report["x"], 0.0)


def test_riccati_degenerate_exit_5(tmp_path):
    mat = tmp_path / "m.json"
    mat.write_text("[[1e-08]]")
    assert main(["riccati", str(mat)]) == 5


def test_usage_error_exit_2():
    res = _run(["build", "nonsense"])
    assert res.returncode == 2


def test_tolerance_flags_are_echoed(tmp_path):
    alg = tmp_path / "dr.json"
    main(["build", "damek-ricci", "--l", "1", "--output", str(alg)])
    out = tmp_path / "rep.json"
    assert main(["analyze", str(alg), "--tol-einstein-residual", "1e-6",
                 "--output", str(out)]) == 0
    report = json.loads(out.read_text())
    assert report["tolerances"]["einstein_residual"] == 1e-6


def test_build_report_matches_cli(tmp_path):
    g = build_damek_ricci(clifford_generators(1))
    report = build_report(g, seed=0)
    assert report["classification"] == "RankOneSymmetric"
    assert report["einstein"]["is_einstein"] is True
    assert report["mean_curvature"]["max_deviation"] <= 1e-5
    alg = tmp_path / "alg.json"
    alg.write_text(json.dumps(algebra_to_dict(g)))
    out = tmp_path / "rep.json"
    assert main(["analyze", str(alg), "--output", str(out)]) == 0
    assert json.loads(out.read_text())["classification"] == "RankOneSymmetric"
