import json
import math

import numpy as np
import pytest

import kssim


def small(**extra):
    sections = {
        "grid": {"dim": 1, "extent": [4], "cells": [32]},
        "initial": {"kind": "gaussian", "amplitude": 3, "width": 0.4, "center": [2, 0], "floor": 0.1},
        "run": {"horizon": 1},
        "step": {"diagnostics_stride": 5},
    }
    sections.update(extra)
    return kssim.config(preset="concave1d", **sections)


def test_presets_listed():
    names = [n for n, _ in kssim.presets()]
    assert {"blowup2d", "suppress2d", "suppress1d", "concave1d", "nonmono1d", "boundedgamma1d"} <= set(names)
    text = kssim.preset_config("suppress1d")
    assert kssim.normalize_config(text) == text


def test_beta1_against_grid_search():
    s = np.linspace(0.0, 10.0, 2_000_001)
    brute = np.max(s - s * np.log1p(s))
    assert kssim.beta1() == pytest.approx(brute, rel=1e-8)
    assert kssim.beta1() == pytest.approx(0.3304, rel=1e-3)


def test_constants_dict():
    c = kssim.constants(small())
    assert c["assumptions"]["boundedness_applicable"]
    assert c["constants"]["branch"] == "unbounded"
    assert c["constants"]["vstar"] >= c["vin_max"]


def test_helmholtz_matches_cosine_mode():
    n = 128
    x = (np.arange(n) + 0.5) / n
    rhs = np.cos(np.pi * x)[None, :] * np.cos(np.pi * x)[:, None]
    z = kssim.helmholtz_solve(rhs, [1.0, 1.0])
    assert z.shape == (n, n)
    assert np.max(np.abs(z - rhs / (1 + 2 * np.pi**2))) < 1e-4
    lap = kssim.laplacian(np.ones(16), [2.0])
    assert np.all(lap == 0.0)


def test_run_returns_trajectory_and_fields(tmp_path):
    res = kssim.run(small(), str(tmp_path))
    traj = res["trajectory"]
    assert traj["t"][0] == 0.0
    assert traj["t"][-1] == pytest.approx(1.0)
    assert np.all(np.diff(traj["t"]) > 0)
    assert np.all(traj["u_min"] >= 0.0)
    assert math.isnan(traj["ki_residual"][0])
    assert res["u"].shape == (32,)
    assert res["summary"]["termination"] == "horizon"
    summary = json.loads((tmp_path / "summary.json").read_text())
    assert summary["steps"] == res["summary"]["steps"]
    assert (tmp_path / "diagnostics.csv").exists()


def test_run_is_deterministic():
    a = kssim.run(small())["trajectory"]["u_max"]
    b = kssim.run(small())["trajectory"]["u_max"]
    assert np.array_equal(a, b)


def test_sweep_rows_in_axis_order():
    rows = kssim.sweep(small(sweep={"source.lambda": [0, 1, 2]}), threads=2)
    assert [r["axes"]["source.lambda"] for r in rows] == [0.0, 1.0, 2.0]
    assert all(r["ok"] for r in rows)
    assert rows[0]["peak_u_max"] >= rows[2]["peak_u_max"]


def test_errors_map_to_python():
    with pytest.raises(kssim.ConfigError):
        kssim.run("[grid]\ncolour = 1\n")
    with pytest.raises(ValueError):
        kssim.run(kssim.config(preset="nope"))
    with pytest.raises(ValueError):
        kssim.helmholtz_solve(np.zeros(8), [1.0, 1.0])
