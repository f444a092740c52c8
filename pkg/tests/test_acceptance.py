#!/usr/bin/env python
"""
Statistical recovery runs on synthetic performances. Slow; deselect with
``pytest -m "not slow"``.
"""
import time

import numpy as np
import pytest

from ensync.ensemble_model import EnsembleConfig, run_filter, run_smoother
from ensync.recovery import DEFAULT_SIGMA_T, recovery_config, run_recovery
from ensync.synth import (GainSpec, SimulationParams, make_script, metronome_performer,
                          simulate, to_ioi_series)

pytestmark = pytest.mark.slow


def test_smoothing_a_quartet_is_fast():
    script = make_script('deadpan', 4, 46, 500.0)
    timeline, _ = simulate(SimulationParams(4, 46, script, sigma_T=DEFAULT_SIGMA_T, seed=0))
    data = to_ioi_series(timeline)
    config = EnsembleConfig(4)
    run_smoother(data, config)
    times = []
    for _ in range(20):
        t0 = time.perf_counter()
        run_smoother(data, config)
        times.append(time.perf_counter() - t0)
    assert np.median(times) < 0.1


def test_static_gain_recovery():
    passing = 0
    for seed in range(20):
        report = run_recovery('deadpan', 4, 200, seed)
        final = report.trajectory.alpha_mean[-50:].mean(axis=0)
        passing += np.all(np.abs(final - report.truth.alpha[-1]) <= 0.1)
    assert passing >= 18


def test_real_data_defaults_overstate_alpha_on_simulated_data():
    # All the noise on the tempo walk, none on r: alpha soaks up the
    # timing noise of the simulator.
    biased = run_recovery('deadpan', 4, 200, 0, config=EnsembleConfig(4))
    matched = run_recovery('deadpan', 4, 200, 0)
    assert np.mean(biased.trajectory.alpha_mean[-50:]) > 0.28
    assert abs(np.mean(matched.trajectory.alpha_mean[-50:]) - 0.25) < 0.03


def test_filtered_duo_recovers_static_gain():
    for seed in range(10):
        script = make_script('deadpan', 2, 200, 500.0)
        params = SimulationParams(2, 200, script, alpha=GainSpec.constant(0.25),
                                  sigma_T=DEFAULT_SIGMA_T, seed=seed)
        timeline, _ = simulate(params)
        _, traj = run_filter(to_ioi_series(timeline), recovery_config(2))
        np.testing.assert_allclose(traj.alpha_mean[-1], 0.25, atol=0.1)


def test_metronome_tapper_recovers_phase_correction():
    towards_click, from_click = [], []
    for seed in range(10):
        timeline, _ = metronome_performer(200, 500.0, alpha=0.25, sigma_T=DEFAULT_SIGMA_T,
                                          seed=seed)
        _, traj = run_filter(to_ioi_series(timeline), recovery_config(2))
        towards_click.append(traj.alpha_mean[-1, 0])
        from_click.append(traj.alpha_mean[-1, 1])
    np.testing.assert_allclose(towards_click, 0.25, atol=0.1)
    # the clicks ignore the tapper; their gain leaves the prior towards 0
    assert np.mean(from_click) < 0.2

def test_leader_direction():
    passing = 0
    for seed in range(20):
        report = run_recovery('speed', 4, 200, seed, leader=2)
        assert report.window == (67, 200)
        passing += report.leader_direction_ok()
    assert passing >= 15


def test_no_asynchrony_leaves_gains_at_their_prior():
    report = run_recovery('deadpan', 4, 46, 0, sigma_T=0.0)
    np.testing.assert_allclose(report.trajectory.alpha_mean, 0.25, atol=0.05)


def test_single_player_reduction():
    script = make_script('deadpan', 1, 100, 500.0)
    timeline, truth = simulate(SimulationParams(1, 100, script, sigma_T=DEFAULT_SIGMA_T,
                                                seed=0))
    filter_steps, traj = run_filter(to_ioi_series(timeline), EnsembleConfig(1))
    assert traj.is_empty()
    estimates = np.array([fs.posterior.mean[0] for fs in filter_steps])
    assert abs(np.mean(estimates[50:]) - truth.T[-1, 0]) < 10.0
