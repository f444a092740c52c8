"""
    Recovery experiments: simulate with known gains, smooth, compare.
"""
import math
import time

import numpy as np
import pandas as pd

from . import logger
from .ensemble_model import EnsembleConfig, GainIndex, run_smoother
from .synth import (DEFAULT_LEADER_DRIFT, GainSpec, SimulationParams, leader_drift,
                    make_script, simulate, to_ioi_series)

__all__ = ['RecoveryReport', 'run_recovery', 'recovery_config', 'DEFAULT_SIGMA_T']

DEFAULT_SIGMA_T = math.sqrt(500.0)

# Random-walk variances of the tempo (ms^2) and of alpha used to score
# simulated performances.
RECOVERY_TEMPO_VAR = 10.0
RECOVERY_ALPHA_VAR = 1e-5


def recovery_config(K, sigma_T=DEFAULT_SIGMA_T, **changes):
    """
        The estimator settings that match :py:func:`ensync.synth.simulate`.

        The simulator draws its timing noise fresh at every interval and
        keeps the timekeeper fixed outside the tempo script, so the noise
        goes to ``r`` (``sigma_r2 = sigma_T**2``) and ``T`` gets only a
        small walk to follow the scripted ramps. Putting the noise on the
        ``T`` walk instead, as the real-data defaults do, biases alpha
        upwards on these data.
    """
    noise = max(float(sigma_T) ** 2, 1.0)
    values = dict(sigma_T2=RECOVERY_TEMPO_VAR, sigma_r2=noise, init_Tr_var=noise,
                  v_alpha=RECOVERY_ALPHA_VAR)
    values.update(changes)
    return EnsembleConfig(K, **values)


class RecoveryReport(object):
    """
        Per ordered pair: mean absolute error of the smoothed alpha over the
        last quarter of the steps, and the slope of the smoothed alpha over
        the tempo-change window (NaN without a window).
    """

    def __init__(self, condition, K, N, seed, leader, mae, slopes, window, runtime_ms,
                 trajectory, truth):
        self.condition = condition
        self.K = K
        self.N = N
        self.seed = seed
        self.leader = leader
        self.index = GainIndex(K)
        self.mae = mae
        self.slopes = slopes
        self.window = window
        self.runtime_ms = runtime_ms
        self.trajectory = trajectory
        self.truth = truth

    @property
    def max_mae(self):
        return float(np.max(self.mae)) if self.mae.size else 0.0

    def follower_slopes(self):
        """ Slopes of alpha_{i,leader}, i != leader. """
        return np.array([self.slopes[c] for c, (_, j) in enumerate(self.index)
                         if j == self.leader])

    def leader_slopes(self):
        """ Slopes of alpha_{leader,j}. """
        return np.array([self.slopes[c] for c, (i, _) in enumerate(self.index)
                         if i == self.leader])

    def leader_direction_ok(self):
        """ Followers move towards the leader, the leader away from them. """
        if self.leader is None or self.window is None or self.K < 2:
            return False
        return bool(np.all(self.follower_slopes() > 0) and np.mean(self.leader_slopes()) < 0)

    def to_frame(self):
        rows = [(i, j, self.mae[c], self.slopes[c]) for c, (i, j) in enumerate(self.index)]
        return pd.DataFrame(rows, columns=['i', 'j', 'mae_alpha', 'slope_alpha'])

    def summary(self):
        s = ('condition=%s K=%d N=%d seed=%s max_mae=%.6g runtime_ms=%.3f' %
             (self.condition, self.K, self.N, self.seed, self.max_mae, self.runtime_ms))
        if self.window is not None:
            s += ' window=%d-%d leader=%s leader_direction_ok=%s' % (
                self.window[0], self.window[1], self.leader, self.leader_direction_ok())
        return s


def run_recovery(condition, K, N, seed, config=None, leader=None, base_T=500.0,
                 sigma_T=DEFAULT_SIGMA_T, alpha=0.25, drift=DEFAULT_LEADER_DRIFT):
    """
        Simulates a performance with constant alpha (plus, in the speed
        condition, a leadership-shaped drift of size ``drift``), smooths it
        and scores the smoothed alpha against the truth.

        Without ``config`` the estimator uses :py:func:`recovery_config`.
    """
    if config is None:
        config = recovery_config(K, sigma_T)
    script = make_script(condition, K, N, float(base_T), leader=leader, seed=seed)
    if condition == 'speed' and drift:
        alpha_spec = GainSpec(alpha, drift=leader_drift(K, leader, drift))
    else:
        alpha_spec = GainSpec.constant(alpha)
    params = SimulationParams(K, N, script, alpha=alpha_spec, sigma_T=sigma_T, seed=seed)
    timeline, truth = simulate(params)

    t0 = time.perf_counter()
    _, trajectory = run_smoother(to_ioi_series(timeline), config)
    runtime_ms = 1000.0 * (time.perf_counter() - t0)

    last = max(1, N // 4)
    mae = np.mean(np.abs(trajectory.alpha_mean[-last:] - truth.alpha[-last:]), axis=0)

    window = script.change_window
    slopes = np.full(mae.shape, np.nan)
    if window is not None:
        steps = np.arange(window[0], window[1] + 1)
        for c in range(slopes.size):
            slopes[c] = np.polyfit(steps, trajectory.alpha_mean[steps - 1, c], 1)[0]

    report = RecoveryReport(condition, K, N, seed, leader, mae, slopes, window,
                            runtime_ms, trajectory, truth)
    logger.info(report.summary())
    return report
