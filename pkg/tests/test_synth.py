#!/usr/bin/env python
"""
Tests for the performance simulator and the tempo scripts.
"""
import numpy as np
import pytest

from ensync.ensemble_model import OnsetTimeline, pair_index
from ensync.interface import SimulationUnstable
from ensync.synth import (ALPHA_MAX, ALPHA_MIN, GainSpec, SimulationParams, TempoScript,
                          leader_drift, make_script, metronome_performer, simulate,
                          single_performer, to_ioi_series)


def duo(N, alpha, sigma_T, seed=0, initial_onsets=(0.0, 0.0), beta=0.0):
    script = make_script('deadpan', 2, N, 500.0)
    params = SimulationParams(2, N, script, alpha=GainSpec.constant(alpha),
                              beta=GainSpec.constant(beta), sigma_T=sigma_T, seed=seed,
                              initial_onsets=initial_onsets)
    return simulate(params)


def test_deadpan_without_noise_keeps_base_interval():
    script = make_script('deadpan', 4, 30, 480.0)
    params = SimulationParams(4, 30, script, alpha=GainSpec(0.7, step_std=0.05),
                              beta=GainSpec(0.1, step_std=0.01), sigma_T=0.0, seed=3)
    timeline, truth = simulate(params)
    np.testing.assert_array_equal(np.diff(timeline.onsets, axis=0), 480.0)
    np.testing.assert_array_equal(truth.T, 480.0)


def test_closed_form_asynchrony_decay():
    timeline, _ = duo(50, 0.25, 0.0, initial_onsets=(0.0, 10.0))
    A = timeline.onsets[:, 1] - timeline.onsets[:, 0]
    expected = 10.0 * 0.5 ** np.arange(51)
    np.testing.assert_allclose(A[:3], [10.0, 5.0, 2.5], rtol=1e-12)
    np.testing.assert_allclose(A, expected, rtol=0, atol=1e-9)


def test_determinism():
    script = make_script('normal', 3, 40, 500.0, seed=2)
    params = SimulationParams(3, 40, script, alpha=GainSpec(0.25, step_std=0.01),
                              sigma_T=15.0, seed=11)
    a, truth_a = simulate(params)
    b, truth_b = simulate(params)
    assert a == b
    np.testing.assert_array_equal(truth_a.alpha, truth_b.alpha)


def test_ground_truth_shapes():
    script = make_script('deadpan', 4, 46, 500.0)
    timeline, truth = simulate(SimulationParams(4, 46, script, sigma_T=10.0, seed=0))
    assert timeline.N == 46 and timeline.K == 4
    assert truth.alpha.shape == (46, 12)
    assert truth.beta.shape == (46, 12)
    assert truth.T.shape == (47, 4)
    data = to_ioi_series(timeline)
    assert data.iois.shape == (46, 4)


def test_static_gains_equal_the_static_model():
    """Zero random-walk steps reproduce the fixed-gain recursion step for step."""
    K, N, sigma_T, seed = 3, 25, 12.0, 4
    script = make_script('deadpan', K, N, 500.0)
    params = SimulationParams(K, N, script, alpha=GainSpec(0.3, step_std=0.0),
                              beta=GainSpec(0.0, step_std=0.0), sigma_T=sigma_T, seed=seed)
    timeline, truth = simulate(params)

    rng = np.random.default_rng(seed)
    t = np.zeros((N + 1, K))
    for n in range(1, N + 1):
        eps = rng.normal(0.0, sigma_T, K)
        for i in range(K):
            correction = sum(0.3 * (t[n - 1, i] - t[n - 1, j]) for j in range(K) if j != i)
            t[n, i] = t[n - 1, i] + 500.0 - correction + eps[i]
    np.testing.assert_allclose(timeline.onsets, t, rtol=1e-12, atol=1e-9)
    np.testing.assert_array_equal(truth.alpha, 0.3)


def test_single_performer():
    onsets, T = single_performer(30, 500.0, 8.0, seed=5)
    assert onsets.shape == (31,)
    np.testing.assert_array_equal(T, 500.0)
    rng = np.random.default_rng(5)
    eps = np.array([rng.normal(0.0, 8.0, 1)[0] for _ in range(30)])
    np.testing.assert_allclose(np.diff(onsets), 500.0 + eps, rtol=1e-12)


def test_metronome_asynchrony_decays_geometrically():
    timeline, truth = metronome_performer(20, 500.0, alpha=0.3, initial_asynchrony=40.0)
    assert timeline.K == 2
    np.testing.assert_array_equal(timeline.onsets[:, 1], 500.0 * np.arange(21))
    A = timeline.onsets[:, 0] - timeline.onsets[:, 1]
    np.testing.assert_allclose(A, 40.0 * 0.7 ** np.arange(21), rtol=1e-12, atol=1e-9)
    np.testing.assert_array_equal(truth.alpha[:, 0], 0.3)
    np.testing.assert_array_equal(truth.alpha[:, 1], 0.0)


def test_metronome_period_correction():
    timeline, truth = metronome_performer(2, 500.0, alpha=0.0, beta=0.1, initial_asynchrony=20.0)
    # T_1 = 500 - 0.1 * 20, A_1 = 18, T_2 = 498 - 0.1 * 18
    np.testing.assert_allclose(truth.T[:, 0], [500.0, 498.0, 496.2], rtol=1e-12)
    np.testing.assert_allclose(timeline.onsets[:, 0], [20.0, 518.0, 1014.2], rtol=1e-12)


def test_metronome_noise_is_seeded():
    a, _ = metronome_performer(50, 500.0, sigma_T=10.0, seed=4)
    b, _ = metronome_performer(50, 500.0, sigma_T=10.0, seed=4)
    c, _ = metronome_performer(50, 500.0, sigma_T=10.0, seed=5)
    np.testing.assert_array_equal(a.onsets, b.onsets)
    assert not np.array_equal(a.onsets, c.onsets)


def test_metronome_overcorrection_is_unstable():
    with pytest.raises(SimulationUnstable) as excinfo:
        metronome_performer(100, 500.0, alpha=2.5, initial_asynchrony=10.0)
    assert excinfo.value.step > 1


def test_noise_scaling():
    N = 10000
    a, _ = duo(N, 0.25, 10.0, seed=21)
    b, _ = duo(N, 0.25, 20.0, seed=21)
    std_a = np.std(a.onsets[:, 0] - a.onsets[:, 1])
    std_b = np.std(b.onsets[:, 0] - b.onsets[:, 1])
    assert 1.8 <= std_b / std_a <= 2.2


def test_phase_correction_keeps_asynchrony_bounded():
    N = 10000
    corrected, _ = duo(N, 0.25, 5.0, seed=8)
    uncorrected, _ = duo(N, 0.0, 5.0, seed=8)
    A_corrected = corrected.onsets[:, 0] - corrected.onsets[:, 1]
    A_free = uncorrected.onsets[:, 0] - uncorrected.onsets[:, 1]
    assert np.max(np.abs(A_corrected)) < 100.0
    assert np.var(A_free) > 20 * np.var(A_corrected)


def test_unstable_gains():
    with pytest.raises(SimulationUnstable) as excinfo:
        duo(40, 1.5, 0.0, initial_onsets=(0.0, 200.0))
    assert excinfo.value.step is not None


def test_alpha_is_clipped():
    script = make_script('deadpan', 2, 200, 500.0)
    params = SimulationParams(2, 200, script, alpha=GainSpec(0.25, step_std=0.5),
                              sigma_T=0.0, seed=1)
    _, truth = simulate(params)
    assert truth.alpha.min() >= ALPHA_MIN
    assert truth.alpha.max() <= ALPHA_MAX
    assert np.any(truth.alpha == ALPHA_MIN) or np.any(truth.alpha == ALPHA_MAX)


def test_period_correction_changes_timekeepers():
    timeline, truth = duo(5, 0.0, 0.0, initial_onsets=(0.0, 10.0), beta=0.1)
    # A_12 = -10 at the first step: T_1 = 500 + 0.1 * 10
    assert truth.T[1, 0] == pytest.approx(501.0)
    assert truth.T[1, 1] == pytest.approx(499.0)
    np.testing.assert_array_equal(truth.beta, 0.1)


def test_leader_drift():
    drift = leader_drift(4, 2, 0.15)
    for i in (1, 3, 4):
        assert drift[pair_index(i, 2, 4)] == 0.15
        assert drift[pair_index(2, i, 4)] == -0.15
    assert np.count_nonzero(drift) == 6


def test_drift_is_spread_over_the_change_window():
    N = 46
    script = make_script('speed', 4, N, 500.0, leader=2)
    drift = leader_drift(4, 2, 0.15)
    params = SimulationParams(4, N, script, alpha=GainSpec(0.25, drift=drift),
                              sigma_T=0.0, seed=0)
    _, truth = simulate(params)
    first, last = script.change_window
    follower = pair_index(1, 2, 4)
    assert truth.alpha[first - 2, follower] == 0.25
    assert truth.alpha[last - 1, follower] == pytest.approx(0.40)
    assert truth.alpha[-1, pair_index(2, 1, 4)] == pytest.approx(0.10)
    assert np.all(np.diff(truth.alpha[:, follower]) >= 0)


class TestScripts(object):

    def test_deadpan(self):
        script = make_script('deadpan', 4, 46, 500.0)
        assert script.segments == [(1, 46, 1.0, 1.0)]
        np.testing.assert_array_equal(script.curve(), 1.0)
        assert script.change_window is None

    def test_speed_thirds(self):
        script = make_script('speed', 4, 46, 500.0, leader=2)
        assert script.segments == [(16, 31, 1.0, 0.8), (31, 46, 0.8, 1.0)]
        assert script.change_window == (16, 46)
        assert script.multiplier(15) == 1.0
        assert script.multiplier(31) == pytest.approx(0.8)
        assert script.multiplier(46) == pytest.approx(1.0)
        np.testing.assert_array_equal(script.multipliers(31, 4),
                                      [1.0, script.multiplier(31), 1.0, 1.0])

    def test_speed_changes_the_leader_only(self):
        script = make_script('speed', 3, 30, 500.0, leader=1)
        params = SimulationParams(3, 30, script, alpha=GainSpec.constant(0.0), sigma_T=0.0)
        timeline, _ = simulate(params)
        iois = np.diff(timeline.onsets, axis=0)
        assert iois[:, 0].min() == pytest.approx(400.0)
        np.testing.assert_array_equal(iois[:, 1:], 500.0)

    def test_normal_is_reproducible(self):
        a = make_script('normal', 4, 46, 500.0, seed=9)
        b = make_script('normal', 4, 46, 500.0, seed=9)
        assert a == b
        np.testing.assert_array_equal(a.curve(), b.curve())
        assert np.all(np.abs(a.curve() - 1.0) <= 0.03 + 1e-12)
        assert a != make_script('normal', 4, 46, 500.0, seed=10)

    @pytest.mark.parametrize('kwargs', [
        dict(condition='speed', K=4, N=46, base_T=500.0),
        dict(condition='speed', K=4, N=46, base_T=500.0, leader=5),
        dict(condition='speed', K=4, N=2, base_T=500.0, leader=1),
        dict(condition='deadpan', K=4, N=46, base_T=500.0, leader=1),
        dict(condition='allegro', K=4, N=46, base_T=500.0),
    ])
    def test_invalid(self, kwargs):
        with pytest.raises(ValueError):
            make_script(**kwargs)

    def test_segments_are_validated(self):
        with pytest.raises(ValueError):
            TempoScript('deadpan', 10, 500.0, [(1, 6, 1.0, 1.0), (5, 10, 1.0, 1.0)], [1])
        with pytest.raises(ValueError):
            TempoScript('deadpan', 10, 500.0, [(1, 11, 1.0, 1.0)], [1])
        with pytest.raises(ValueError):
            TempoScript('deadpan', 10, 500.0, [(1, 10, 1.0, 0.0)], [1])


def test_script_must_cover_the_performance():
    with pytest.raises(ValueError):
        SimulationParams(2, 10, make_script('deadpan', 2, 12, 500.0))


def test_to_ioi_series():
    data = to_ioi_series(OnsetTimeline([[0.0], [0.5], [1.0]]))
    assert data.iois[:, 0].tolist() == [0.5, 0.5]
    assert data.initial_onsets.tolist() == [0.0]


def test_ioi_round_trip():
    script = make_script('normal', 4, 46, 500.0, seed=1)
    timeline, _ = simulate(SimulationParams(4, 46, script, sigma_T=20.0, seed=1,
                                            initial_onsets=[0.0, 3.0, -4.0, 12.0]))
    back = to_ioi_series(timeline).to_timeline()
    np.testing.assert_allclose(back.onsets, timeline.onsets, rtol=0, atol=1e-9)


def test_ioi_series_rejects_non_increasing_onsets():
    with pytest.raises(ValueError):
        to_ioi_series(OnsetTimeline([[0.0], [0.5], [0.5]]))
