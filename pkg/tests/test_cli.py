import json
import math
import os
import signal
import subprocess
import sys
import time

import numpy as np
import pytest

from bec2.cli import (
    EXIT_CHECK_FAILED,
    EXIT_INTERRUPTED,
    EXIT_OK,
    EXIT_SINGULAR,
    EXIT_VALIDATION,
    main,
)
from bec2.io import load_snapshot, read_csv, sha256

BASE = """
species:
  - {mass: 1.0, detuning: 50.0, dipole_moment: 0.3, group_velocity: 2.0}
  - {mass: 1.7, detuning: -80.0, dipole_moment: 0.25, group_velocity: 1.5}
mixture: {densities: [0.2, 0.3]}
field: {vacuum_wavenumber: 1.0, envelope_width: 10.0, peak_rabi: [4.0, 5.0]}
simulation: {grid_points: 512, steps: 400, observe_every: 100}
"""

# one polarisable species (alpha = 1) and a passive partner; the pole sits at rho_1 = 3/(4 pi)
POLE = """
species:
  - {mass: 1.0, detuning: -1.0, dipole_moment: 1.0}
  - {mass: 1.0, detuning: 1.0}
mixture: {densities: [0.0, 0.0]}
field: {vacuum_wavenumber: 1.0, envelope_width: 1.0, peak_rabi: [1.0, 1.0], refractive_index: 1.0}
"""


@pytest.fixture
def write(tmp_path):
    def _write(text, name="c.yaml"):
        p = tmp_path / name
        p.write_text(text)
        return str(p)

    return _write


def _summary(out):
    return json.loads((out / "summary.json").read_text())


def test_index_vacuum_point(write, tmp_path):
    out = tmp_path / "o"
    assert main(["index", "--config", write(POLE), "--out", str(out)]) == EXIT_OK
    header, rows = read_csv(out / "index.csv")
    assert header == ["rho_1", "rho_2", "S", "chi", "n", "n_imag", "flags"]
    (row,) = rows
    assert float(row[3]) == 0.0 and float(row[4]) == 1.0 and row[6] == ""


def test_chi_sweep_across_pole(write, tmp_path):
    pole = 3 / (4 * math.pi)
    text = POLE + f"sweep:\n  - {{parameter: mixture.densities.0, start: 0.0, stop: {2 * pole!r}, count: 11}}\n"
    out = tmp_path / "o"
    assert main(["chi", "--config", write(text), "--out", str(out)]) == EXIT_OK
    header, rows = read_csv(out / "chi.csv")
    assert len(rows) == 11
    flags = [r[-1] for r in rows]
    assert flags[5] == "singular" and math.isnan(float(rows[5][header.index("chi")]))
    # chi = S / (1 - S) with S = rho_1 here; below the pole it is finite and rising
    chi = [float(r[header.index("chi")]) for r in rows[:5]]
    assert chi == sorted(chi)


def test_json_format(write, tmp_path):
    out = tmp_path / "o"
    assert main(["index", "--config", write(POLE), "--out", str(out), "--format", "json"]) == EXIT_OK
    (rec,) = json.loads((out / "index.json").read_text())
    assert rec["n"] == 1.0


def test_diffract_dark_field_has_single_order(write, tmp_path):
    out = tmp_path / "o"
    text = BASE.replace("peak_rabi: [4.0, 5.0]", "peak_rabi: [0.0, 0.0]")
    assert main(["diffract", "--config", write(text), "--out", str(out)]) == EXIT_OK
    _, rows = read_csv(out / "spectrum.csv")
    assert [(r[0], r[1], float(r[2])) for r in rows] == [("1", "0", 1.0), ("2", "0", 1.0)]


def test_diffract_equal_momenta_overlap(write, tmp_path):
    text = BASE.replace("group_velocity: 2.0", "group_velocity: 1.7").replace(
        "mass: 1.7, detuning: -80.0, dipole_moment: 0.25, group_velocity: 1.5",
        "mass: 1.7, detuning: -80.0, dipole_moment: 0.25, group_velocity: 1.0",
    )
    out = tmp_path / "o"
    assert main(["diffract", "--config", write(text), "--out", str(out)]) == EXIT_OK
    s = _summary(out)["spectrum"]
    assert s["angles_coincide"] is True and s["separated"] is False


def test_diffract_rerun_is_byte_identical(write, tmp_path):
    cfg = write(BASE)
    a, b = tmp_path / "a", tmp_path / "b"
    assert main(["diffract", "--config", cfg, "--out", str(a), "--plot"]) == EXIT_OK
    assert main(["diffract", "--config", cfg, "--out", str(b), "--plot"]) == EXIT_OK
    for name in ("spectrum.csv", "spectrum_plot.csv", "summary.json", "config_resolved.yaml"):
        assert sha256(a / name) == sha256(b / name)


def test_manifest_matches_files(write, tmp_path):
    out = tmp_path / "o"
    main(["diffract", "--config", write(BASE), "--out", str(out)])
    entries = _summary(out)["manifest"]
    assert {e["path"] for e in entries} == {"spectrum.csv", "config_resolved.yaml"}
    for e in entries:
        assert sha256(out / e["path"]) == e["sha256"]


def test_simulate_zero_steps_writes_initial_only(write, tmp_path):
    out = tmp_path / "o"
    text = BASE.replace("steps: 400", "steps: 0")
    assert main(["simulate", "--config", write(text), "--out", str(out)]) == EXIT_OK
    assert (out / "snapshot_initial.bin").exists()
    assert not (out / "snapshot_final.bin").exists()


def test_simulate_matches_diffract_without_kinetic_term(write, tmp_path):
    out = tmp_path / "o"
    assert main(["simulate", "--config", write(BASE), "--out", str(out)]) == EXIT_OK
    s = _summary(out)
    assert s["complete"] is True
    assert s["max_order_deviation"] <= 1e-6
    header, rows = read_csv(out / "timeseries.csv")
    assert [int(r[0]) for r in rows] == [0, 100, 200, 300, 400]
    norms = np.array([[float(r[4]), float(r[5])] for r in rows])
    assert np.allclose(norms, norms[0], rtol=1e-12, atol=0)
    final = load_snapshot(out / "snapshot_final.bin")
    assert final.z == pytest.approx(60.0)


def test_sweep_merges_sorted_points(write, tmp_path):
    text = BASE + "sweep:\n  - {parameter: field.peak_rabi.0, start: 2.0, stop: 0.0, count: 3}\n"
    out = tmp_path / "o"
    assert main(["sweep", "--config", write(text), "--out", str(out), "--jobs", "2"]) == EXIT_OK
    header, rows = read_csv(out / "sweep.csv")
    assert [float(r[0]) for r in rows] == [0.0, 1.0, 2.0]
    assert float(rows[0][header.index("P0_1")]) == 1.0
    assert all(r[-1] == "ok" for r in rows)
    assert (out / "point_0002" / "spectrum.csv").exists()


def test_bad_config_exit_code(write, tmp_path, capsys):
    text = BASE.replace("mass: 1.7", "mass: -1.7")
    assert main(["diffract", "--config", write(text), "--out", str(tmp_path / "o")]) == EXIT_VALIDATION
    assert "species[2].mass" in capsys.readouterr().err


def test_singular_exit_code(write, tmp_path):
    text = POLE.replace("densities: [0.0, 0.0]", f"densities: [{3 / (4 * math.pi)!r}, 0.0]")
    assert main(["diffract", "--config", write(text), "--out", str(tmp_path / "o")]) == EXIT_SINGULAR


def test_missing_config(capsys):
    assert main(["diffract"]) == EXIT_VALIDATION


def test_validate_subset_and_fault(tmp_path, capsys):
    assert main(["validate", "--only", "1", "--out", str(tmp_path)]) == EXIT_OK
    assert json.loads((tmp_path / "validation.json").read_text())["passed"] is True
    assert main(["validate", "--only", "4", "--inject-fault", "bessel"]) == EXIT_CHECK_FAILED
    assert "[FAIL]" in capsys.readouterr().out


@pytest.mark.skipif(sys.platform == "win32", reason="POSIX signals")
def test_sigterm_leaves_partial_manifest(write, tmp_path):
    text = BASE.replace("steps: 400", "steps: 2000000").replace("observe_every: 100", "observe_every: 1000")
    out = tmp_path / "o"
    proc = subprocess.Popen(
        [sys.executable, "-m", "bec2", "simulate", "--config", write(text), "--out", str(out)],
        env={**os.environ, "PYTHONWARNINGS": "ignore"},
    )
    deadline = time.time() + 60
    while not (out / "snapshot_initial.bin").exists() and time.time() < deadline:
        time.sleep(0.05)
    time.sleep(0.5)
    proc.send_signal(signal.SIGTERM)
    assert proc.wait(timeout=60) == EXIT_INTERRUPTED
    s = _summary(out)
    assert s["complete"] is False
    assert any(e["path"] == "timeseries.csv" for e in s["manifest"])
