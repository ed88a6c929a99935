"""Smoke tests for the python bindings."""

import json
import math
import os
import pathlib
import subprocess

import pytest

import donorspin as ds

TWO_PI = 2 * math.pi


@pytest.fixture(scope="module")
def bismuth():
    return ds.SpinSystem.bismuth()


def test_zero_field_splitting(bismuth):
    ev = ds.eigenvalues(bismuth, 0.0)
    assert len(ev) == 20
    zfs = (ev[-1] - ev[0]) / TWO_PI
    assert zfs == pytest.approx(7.375e9, rel=1e-9)
    labels = ds.level_labels(bismuth, 5e-3)
    assert sum(1 for f, _ in labels if f == 4) == 9
    assert sum(1 for f, _ in labels if f == 5) == 11


def test_transitions_and_clock(bismuth):
    ts = ds.transitions(bismuth, 1.4e-3)
    assert len(ts) == 18
    line1 = [t for t in ts if t.line == 1]
    assert len(line1) == 1
    assert line1[0].sx_element == pytest.approx(0.48, abs=0.01)

    ct = ds.find_clock_transition(bismuth, 5)
    assert ct is not None
    field, _branch = ct
    assert 26e-3 < field < 28e-3
    assert ds.find_clock_transition(bismuth, 1) is None


def test_shifts(bismuth):
    assert ds.shift_from_strain(1e-4, 1e-4, 1e-4, 0.0, bismuth) == pytest.approx(
        5 * 19.1 * 1e-4 * 1.475e9, rel=1e-9
    )
    assert ds.shift_from_field(1e5, bismuth) == pytest.approx(-19175, rel=1e-3)


def test_decoherence_scalars(bismuth):
    assert ds.flip_flop_limit(4e4) == pytest.approx(0.025)
    assert ds.dd_scaling(1.0, 4, 1.0) == pytest.approx(2.0)
    assert ds.thermal_scaling(0.5) == (pytest.approx(0.5), pytest.approx(0.5))
    assert ds.effective_noise(3e-3, 0.0) is None
    rate = ds.id_rate(5e20, 0.9 * bismuth.gamma_e, math.pi, 0.0)
    assert rate == pytest.approx(334.8, rel=0.01)


def test_surface_noise_depth_scaling():
    depths = [50e-9, 100e-9, 200e-9]
    db = ds.surface_noise_vs_depth(1e15, 5e-6, [0.0], depths)
    assert db[0] / db[1] == pytest.approx(4.0, rel=1e-3)
    assert db[1] / db[2] == pytest.approx(4.0, rel=1e-3)


def test_meissner_enhancement():
    db, db_free, enh = ds.meissner_noise_vs_depth(50e-9, 1e16, [100e-9, 200e-9])
    assert all(e > 1.0 for e in enh)
    assert all(e < 2.0 for e in enh)
    assert db[0] == pytest.approx(db_free[0] * enh[0], rel=1e-9)


def test_run_subcommand(tmp_path):
    files = ds.run_subcommand("dd", "res1", {"dd.n_max": "8"}, str(tmp_path))
    names = {pathlib.Path(f).name for f in files}
    assert "dd.csv" in names
    assert "manifest.json" in names
    manifest = json.loads((tmp_path / "manifest.json").read_text())
    assert manifest["parameters"]["dd.n_max"] == 8
    rows = (tmp_path / "dd.csv").read_text().strip().splitlines()
    assert rows[-1].split(",")[0] == "8"


def test_clock_manifest(tmp_path):
    ds.run_subcommand("clock", "res1", {}, str(tmp_path))
    manifest = json.loads((tmp_path / "manifest.json").read_text())
    b_ct = manifest["results"]["b0_ct_T"]
    assert 26e-3 < b_ct < 28e-3


def test_unconvolved_spectrum_override(tmp_path):
    ds.run_subcommand(
        "spectrum",
        "res1",
        {"spectrum.sigma_b_factor": "0", "spectrum.b0_max_mT": "1.6"},
        str(tmp_path),
    )
    rows = [r for r in (tmp_path / "spectrum.csv").read_text().splitlines()
            if not r.startswith("#")]
    assert len(rows) > 100


def test_cli_exit_codes(tmp_path):
    cli = os.environ.get("DONORSPIN_CLI")
    if not cli:
        pytest.skip("CLI path not provided")
    ok = subprocess.run(
        [cli, "thermal", "--preset", "res1", "--out", str(tmp_path)],
        capture_output=True,
    )
    assert ok.returncode == 0
    bad = subprocess.run(
        [cli, "thermal", "--preset", "res1", "--override", "nope=1"],
        capture_output=True,
    )
    assert bad.returncode == 2
    assert b"config" in bad.stderr
