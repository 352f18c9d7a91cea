# Copyright 2026 The rydhm Authors
# SPDX-License-Identifier: Apache-2.0

import math

import pytest

import rydhm


def two_level(omega=1.0, gamma=6.0):
    p = rydhm.DriveParams()
    p.scheme = rydhm.LevelScheme.two_level
    p.omega12 = omega
    p.gamma21 = gamma
    return p


def test_two_level_resonance():
    # Omega = 1, gamma = 6: rho_ee = Omega^2 / (gamma^2/4 + 2 Omega^2) = 1/11
    pops = rydhm.single_steady_state(two_level(), 0.0)
    assert len(pops) == 2
    assert math.isclose(pops[1], 1.0 / 11.0, abs_tol=1e-12)
    assert math.isclose(sum(pops), 1.0, abs_tol=1e-12)


def test_pair_factorizes_without_coupling():
    p = rydhm.preset("fig4b")["physics"]
    params = rydhm.DriveParams()
    for key in ("omega12", "omega23", "gamma21", "gamma32", "dephasing21", "dephasing32"):
        setattr(params, key, p[key])
    a = rydhm.single_steady_state(params, 0.3)
    b = rydhm.single_steady_state(params, -1.1)
    pair = rydhm.pair_steady_state(params, 0.3, -1.1, 0.0)
    for i in range(3):
        for j in range(3):
            assert math.isclose(pair[3 * i + j], a[i] * b[j], abs_tol=1e-10)


def test_exact_two_atoms_matches_pair():
    params = two_level()
    params.delta = 0.5  # the exact solver detunes every atom by params.delta
    pair = rydhm.pair_steady_state(params, 0.5, 0.5, 3.0)
    exact = rydhm.exact_steady_state(params, [[0.0, 3.0], [3.0, 0.0]])
    assert max(abs(x - y) for x, y in zip(pair, exact["joint"])) < 1e-10


def test_presets_and_validation():
    names = rydhm.preset_names()
    assert "fig5" in names and "fig8b" in names
    cfg = rydhm.preset("fig7")
    assert rydhm.validate_config(cfg)["partition"]["high_density"] is True
    cfg["partition"]["upper"] = 1.9
    with pytest.raises(rydhm.ValidationError, match="R2"):
        rydhm.validate_config(cfg)
    with pytest.raises(ValueError):
        rydhm.validate_config('{"mc": {"sede": 1}}')


def test_run_point_is_reproducible():
    cfg = rydhm.preset("fig4b")
    cfg["geometry"]["count"] = 10
    cfg["mc"]["trajectories"] = 50
    a = rydhm.run_point(cfg, 0.0)
    b = rydhm.run_point(cfg, 0.0)
    assert a["rho33"] == b["rho33"]
    assert 0.0 < a["rho33"] < 1.0
    assert a["snapshots"] == 50
    assert a["mean_pairs"] == 9


def test_run_experiment_outputs():
    cfg = rydhm.preset("fig2")
    cfg["scan"]["detunings"] = [0.0]
    cfg["scan"]["couplings"] = [0.01, 10.0]
    files = rydhm.run_experiment(cfg)
    (name, text), = files.items()
    assert name.endswith("_deviation.csv")
    rows = [l for l in text.splitlines() if l and not l.startswith("#")]
    assert rows[0] == "delta,v,dev_a,dev_b,dev_c"
    assert len(rows) == 3
