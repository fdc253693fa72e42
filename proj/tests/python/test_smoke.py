"""Smoke tests for the python bindings: shapes, determinism, and the basic
numerical contracts, plus an end-to-end round trip through the CLI binary
when ctest provides its path."""

import json
import os
import subprocess

import numpy as np
import pytest

import travelfield as tf


def test_presets_listed():
    names = tf.preset_names()
    assert "fig2" in names
    assert "fig6" in names
    cfg = tf.preset("fig2")
    assert cfg["grid"]["n1"] == 150
    assert cfg["epochs"] == 8
    assert cfg["velocity"] == {"kind": "constant", "v": [10.0, 0.0]}


def test_run_scenario_shapes_and_determinism():
    cfg = tf.preset("frozen_mc")
    out_a = tf.run_scenario(cfg)
    out_b = tf.run_scenario(cfg)
    frames = out_a["frames"]
    assert frames.shape == (5, 32, 32)
    assert np.isfinite(frames).all()
    np.testing.assert_array_equal(frames, out_b["frames"])

    other = tf.run_scenario(cfg, member=1)
    assert not np.array_equal(frames, other["frames"])

    plan = out_a["plan"]
    assert plan["n_required"] >= 32 + 4
    assert plan["rule"] == "deterministic"


def test_frozen_field_translates():
    cfg = tf.preset("fig2")
    frames = tf.run_scenario(cfg)["frames"]
    for t in range(1, 9):
        shift = 10 * t
        np.testing.assert_array_equal(frames[t, shift:, :], frames[0, : 150 - shift, :])


def test_plan_gaussian_percentile():
    plan = tf.plan_extended_grid(
        150, 8, {"kind": "gaussian", "mu": [5.0, 0.0], "cov": [[1.0, 0.0], [0.0, 1.0]],
                 "redraw": "once-per-field"})
    assert plan["rule"] == "percentile95"
    assert plan["v_max"] == pytest.approx(5.0 + 1.6448536269514722, rel=1e-12)
    assert plan["n_required"] >= 150 + 54


def test_circulant_field_statistics():
    field, report = tf.simulate_spatial_circulant(
        {"kind": "compact", "base": "exponential", "rho": 1.0, "h0": 0.5}, 64, seed=11)
    assert field.shape == (64, 64)
    assert report["exact"]
    assert abs(field.mean()) < 0.1
    assert field.var() == pytest.approx(1.0, rel=0.15)


def test_periodogram_parseval():
    rng = np.random.default_rng(7)
    frames = rng.standard_normal((4, 16, 16))
    P = tf.periodogram3(frames)
    assert P.shape == frames.shape
    assert P.sum() == pytest.approx((frames**2).sum(), rel=1e-10)


def test_discretized_spectrum_is_symmetric():
    S = tf.discretize_spectrum(
        {"kind": "damped", "spatial": {"kind": "power_law", "alpha": 5.0}, "v": [10.0, 0.0],
         "delta": 2.0, "h": 1.0}, 16, 16, 8)
    assert S.shape == (8, 16, 16)
    mirrored = S[(-np.arange(8)) % 8][:, (-np.arange(16)) % 16][:, :, (-np.arange(16)) % 16]
    np.testing.assert_array_equal(S, mirrored)
    assert (S >= 0).all()


@pytest.mark.skipif("TRAVELFIELD_CLI" not in os.environ, reason="CLI path not provided")
def test_cli_round_trip(tmp_path):
    cli = os.environ["TRAVELFIELD_CLI"]
    out_dir = tmp_path / "run"
    proc = subprocess.run(
        [cli, "simulate", "--preset", "frozen_mc", "--out", str(out_dir)],
        capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    sidecar = json.loads((out_dir / "sidecar.json").read_text())
    assert sidecar["epochs"] == 4
    assert len(sidecar["frames"]) == 5

    # Frame binaries agree with the in-process run, byte for byte.
    frames = tf.run_scenario(tf.preset("frozen_mc"))["frames"]
    raw = (out_dir / "frame_0002.bin").read_bytes()
    assert raw[:4] == b"TFLD"
    payload = np.frombuffer(raw[14:], dtype="<f8").reshape(32, 32)
    np.testing.assert_array_equal(payload, frames[2])
