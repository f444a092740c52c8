"""
    Synthetic ensemble performances with known gains.

    Every step ``n = 1..N`` of :py:func:`simulate`:

    1. asynchronies ``A_ij = t_i - t_j`` from the onsets at n-1;
    2. beta random walk, then ``T_i <- T_i - sum_j beta_ij A_ij``;
    3. alpha random walk, clipped to ``[ALPHA_MIN, ALPHA_MAX]``;
    4. ``t_i,n = t_i,n-1 + m_i,n T_i - sum_j alpha_ij A_ij + eps_i``,
       with ``m`` the tempo multiplier of the script and
       ``eps ~ N(0, sigma_T^2)``.
"""
import numpy as np

from . import check, contract, logger
from .ensemble_model import GainIndex, IoiSeries, OnsetTimeline, pair_index
from .interface import SimulationUnstable
from .utils import raise_desc

__all__ = [
    'TempoScript',
    'GainSpec',
    'SimulationParams',
    'GroundTruth',
    'make_script',
    'leader_drift',
    'metronome_performer',
    'simulate',
    'to_ioi_series',
    'single_performer',
]

ALPHA_MIN = -0.5
ALPHA_MAX = 1.5

CONDITIONS = ('deadpan', 'normal', 'speed')

# amplitude of the expressive tempo curve
NORMAL_AMPLITUDE = 0.03
SPEED_FACTOR = 0.8
# total change of the gains towards and from the leader over the tempo change
DEFAULT_LEADER_DRIFT = 0.25


class TempoScript(object):
    """
        Tempo multipliers over the steps 1..N.

        ``segments`` is a list of ``(start, end, m_start, m_end)``; the
        multiplier is linear between the two ends and 1 outside every
        segment. Consecutive segments may share an endpoint. ``players``
        is the list of performers (1-based) the curve applies to.
    """

    def __init__(self, condition, N, base_T, segments, players, leader=None):
        if condition not in CONDITIONS:
            raise_desc(ValueError, 'Unknown condition.', condition=condition)
        check('int,>=1', N)
        check('float,>0', float(base_T))
        last_end = 0
        for (start, end, m0, m1) in segments:
            if not (1 <= start <= end <= N):
                raise_desc(ValueError, 'Segment outside [1, N].', segment=(start, end), N=N)
            if start < last_end:
                raise_desc(ValueError, 'Segments overlap.', segments=segments)
            if m0 <= 0 or m1 <= 0:
                raise_desc(ValueError, 'Tempo multipliers must be positive.',
                           segment=(start, end, m0, m1))
            last_end = end
        self.condition = condition
        self.N = N
        self.base_T = float(base_T)
        self.segments = list(segments)
        self.players = list(players)
        self.leader = leader

    def multiplier(self, n):
        """ The scalar multiplier at step n. """
        m = 1.0
        for (start, end, m0, m1) in self.segments:
            if start <= n <= end:
                if end == start:
                    return m0
                return m0 + (m1 - m0) * (n - start) / float(end - start)
        return m

    def multipliers(self, n, K):
        """ Per-player multipliers at step n (length K). """
        m = np.ones(K)
        value = self.multiplier(n)
        for i in self.players:
            m[i - 1] = value
        return m

    @property
    def change_window(self):
        """ ``(first, last)`` step of the scripted tempo change, or None. """
        if self.condition != 'speed' or not self.segments:
            return None
        return self.segments[0][0], self.segments[-1][1]

    def curve(self):
        return np.array([self.multiplier(n) for n in range(1, self.N + 1)])

    def __eq__(self, other):
        return (isinstance(other, TempoScript) and
                self.condition == other.condition and
                self.N == other.N and
                self.base_T == other.base_T and
                self.segments == other.segments and
                self.players == other.players and
                self.leader == other.leader)

    def __repr__(self):
        return ('TempoScript(%r, N=%d, base_T=%g, leader=%r)' %
                (self.condition, self.N, self.base_T, self.leader))


@contract(condition='str', K='int,>=1', N='int,>=1')
def make_script(condition, K, N, base_T, leader=None, seed=None):
    """
        - ``deadpan``: multiplier 1 everywhere.
        - ``normal``: every player follows ``1 + 0.03 sin(...)``, a
          slow sinusoid whose frequency and phase come from ``seed``.
        - ``speed``: only the leader; linear ramp to x0.8 over the middle
          third, back to x1.0 over the last third.
    """
    if condition not in CONDITIONS:
        raise_desc(ValueError, 'Unknown condition; use one of %s.' % ', '.join(CONDITIONS),
                   condition=condition)
    if condition == 'speed':
        if leader is None:
            raise ValueError('The speed condition needs a leader.')
        if not (1 <= leader <= K):
            raise_desc(ValueError, 'Invalid leader id.', leader=leader, K=K)
        if N < 3:
            raise_desc(ValueError, 'The speed condition needs at least three steps.', N=N)
        start = N // 3 + 1
        middle = (2 * N) // 3 + 1
        segments = [(start, middle, 1.0, SPEED_FACTOR),
                    (middle, N, SPEED_FACTOR, 1.0)]
        return TempoScript(condition, N, base_T, segments, [leader], leader)

    if leader is not None:
        raise_desc(ValueError, 'Only the speed condition has a leader.',
                   condition=condition, leader=leader)
    if condition == 'deadpan':
        return TempoScript(condition, N, base_T, [(1, N, 1.0, 1.0)], range(1, K + 1))

    rng = np.random.default_rng(seed)
    cycles = rng.uniform(0.5, 1.5)
    phase = rng.uniform(0, 2 * np.pi)
    n = np.arange(1, N + 1)
    curve = 1.0 + NORMAL_AMPLITUDE * np.sin(2 * np.pi * cycles * n / N + phase)
    segments = [(int(k), int(k), float(m), float(m)) for k, m in zip(n, curve)]
    return TempoScript(condition, N, base_T, segments, range(1, K + 1))


class GainSpec(object):
    """
        How one family of gains (alpha or beta) evolves.

        ``initial`` is a scalar or a K(K-1) vector; ``step_std`` the
        std-dev of the random-walk increments (0 means static); ``drift``
        an optional K(K-1) vector of total changes, spread linearly over
        the tempo-change window of the script (the whole performance if
        the script has none).
    """

    def __init__(self, initial=0.0, step_std=0.0, drift=None):
        check('float,>=0', float(step_std))
        self.initial = initial
        self.step_std = float(step_std)
        self.drift = None if drift is None else np.asarray(drift, dtype=float)

    @staticmethod
    def constant(value):
        return GainSpec(initial=value)

    def initial_vector(self, K):
        npairs = K * (K - 1)
        init = np.asarray(self.initial, dtype=float)
        if init.ndim == 0:
            return np.full(npairs, float(init))
        check('array[(K*(K-1))](finite)', init, K=K)
        return init.copy()

    def drift_vector(self, K):
        if self.drift is None:
            return np.zeros(K * (K - 1))
        check('array[(K*(K-1))](finite)', self.drift, K=K)
        return self.drift

    def __repr__(self):
        return 'GainSpec(initial=%r, step_std=%r, drift=%r)' % (
            self.initial, self.step_std, self.drift)


def leader_drift(K, leader, amount=DEFAULT_LEADER_DRIFT):
    """
        Drift vector for leadership-shaped ground truth: every follower's
        alpha towards the leader grows by ``amount``, the leader's alpha
        towards every follower decreases by ``amount``.
    """
    drift = np.zeros(K * (K - 1))
    for i in range(1, K + 1):
        if i != leader:
            drift[pair_index(i, leader, K)] += amount
            drift[pair_index(leader, i, K)] -= amount
    return drift


class SimulationParams(object):

    def __init__(self, K, N, script, alpha=None, beta=None, sigma_T=0.0, seed=0,
                 initial_onsets=None):
        check('int,>=1', K)
        check('int,>=1', N)
        check('float,>=0', float(sigma_T))
        if script.N != N:
            raise_desc(ValueError, 'The script covers a different number of steps.',
                       script_N=script.N, N=N)
        if any(not (1 <= i <= K) for i in script.players):
            raise_desc(ValueError, 'The script names unknown players.',
                       players=script.players, K=K)
        self.K = K
        self.N = N
        self.script = script
        self.alpha = alpha if alpha is not None else GainSpec.constant(0.25)
        self.beta = beta if beta is not None else GainSpec.constant(0.0)
        self.sigma_T = float(sigma_T)
        self.seed = seed
        if initial_onsets is None:
            initial_onsets = np.zeros(K)
        self.initial_onsets = np.asarray(initial_onsets, dtype=float)
        check('array[K](finite)', self.initial_onsets, K=K)
        # fail early on malformed gain vectors
        for g in (self.alpha, self.beta):
            g.initial_vector(K)
            g.drift_vector(K)


class GroundTruth(object):
    """
        ``alpha[n-1]``, ``beta[n-1]`` are the gains used at step n (N x K(K-1));
        ``T[n]`` the timekeeper intervals after step n (row 0 is base_T).
    """

    def __init__(self, K, alpha, beta, T):
        self.K = K
        self.alpha = alpha
        self.beta = beta
        self.T = T
        self.index = GainIndex(K)

    @property
    def N(self):
        return self.alpha.shape[0]

    def __repr__(self):
        return 'GroundTruth(K=%d, N=%d)' % (self.K, self.N)


def _drift_increments(drift, window, N):
    """ Per-step increments summing to ``drift`` over the window steps. """
    inc = np.zeros((N, drift.size))
    if not np.any(drift):
        return inc
    first, last = window
    steps = last - first + 1
    inc[first - 1:last] = drift[None, :] / float(steps)
    return inc


def simulate(params):
    """
        Runs the generative model.

        :return: ``(OnsetTimeline, GroundTruth)``
        :raise: SimulationUnstable if some IOI is not positive.
    """
    K, N = params.K, params.N
    rng = np.random.default_rng(params.seed)
    index = GainIndex(K)
    npairs = len(index)
    rows = np.array([i - 1 for (i, _) in index], dtype=int)
    cols = np.array([j - 1 for (_, j) in index], dtype=int)

    window = params.script.change_window or (1, N)
    alpha_inc = _drift_increments(params.alpha.drift_vector(K), window, N)
    beta_inc = _drift_increments(params.beta.drift_vector(K), window, N)

    alpha = params.alpha.initial_vector(K)
    beta = params.beta.initial_vector(K)
    T = np.full(K, params.script.base_T)

    onsets = np.zeros((N + 1, K))
    onsets[0] = params.initial_onsets
    alphas = np.zeros((N, npairs))
    betas = np.zeros((N, npairs))
    Ts = np.zeros((N + 1, K))
    Ts[0] = T

    for n in range(1, N + 1):
        t = onsets[n - 1]
        A = t[rows] - t[cols]

        beta = beta + beta_inc[n - 1]
        if params.beta.step_std > 0:
            beta = beta + rng.normal(0.0, params.beta.step_std, npairs)
        T = T - np.bincount(rows, weights=beta * A, minlength=K)

        alpha = alpha + alpha_inc[n - 1]
        if params.alpha.step_std > 0:
            alpha = alpha + rng.normal(0.0, params.alpha.step_std, npairs)
        alpha = np.clip(alpha, ALPHA_MIN, ALPHA_MAX)

        eps = rng.normal(0.0, params.sigma_T, K)
        ioi = (params.script.multipliers(n, K) * T -
               np.bincount(rows, weights=alpha * A, minlength=K) + eps)
        if np.any(ioi <= 0):
            i = int(np.argmin(ioi))
            msg = ('Nonpositive IOI %g ms for player %d at step %d; '
                   'the gains or the noise are too large.' % (ioi[i], i + 1, n))
            raise SimulationUnstable(msg, step=n)

        onsets[n] = t + ioi
        alphas[n - 1] = alpha
        betas[n - 1] = beta
        Ts[n] = T

    logger.debug('Simulated %s performance K=%d, N=%d, seed=%s.' %
                 (params.script.condition, K, N, params.seed))
    return OnsetTimeline(onsets), GroundTruth(K, alphas, betas, Ts)


def to_ioi_series(timeline):
    """ IOIs ``t_n - t_{n-1}`` and the initial onsets. """
    onsets = timeline.onsets
    return IoiSeries(np.diff(onsets, axis=0), onsets[0])


def single_performer(N, base_T, sigma_T, seed=0, condition='deadpan'):
    """
        One performer alone: no asynchronies, so the IOIs are the
        (scripted) timekeeper interval plus noise.

        :return: ``(onsets, T)`` as 1-D arrays of length N+1.
    """
    script = make_script(condition, 1, N, float(base_T), seed=seed)
    params = SimulationParams(1, N, script, sigma_T=sigma_T, seed=seed)
    timeline, truth = simulate(params)
    return timeline.onsets[:, 0], truth.T[:, 0]


@contract(N='int,>=1', alpha='float', beta='float', sigma_T='float,>=0')
def metronome_performer(N, base_T, alpha=0.25, beta=0.0, sigma_T=0.0, seed=0,
                        initial_asynchrony=0.0, metronome_T=None):
    """
        One performer tapping along with a metronome that clicks every
        ``metronome_T`` ms (default ``base_T``), starting at 0::

            A_{n-1} = t_{n-1} - click_{n-1}
            T_n     = T_{n-1} - beta A_{n-1}
            t_n     = t_{n-1} + T_n - alpha A_{n-1} + eps_n

        The metronome is returned as performer 2, with zero gains and no
        noise, so that the performance can be estimated as a duo; the
        tapper's gains are then those of pair (1, 2).

        :return: ``(OnsetTimeline, GroundTruth)`` with K = 2.
        :raise: SimulationUnstable if some interval is not positive.
    """
    check('float,>0', float(base_T))
    period = float(base_T if metronome_T is None else metronome_T)
    check('float,>0', period)
    rng = np.random.default_rng(seed)

    onsets = np.zeros((N + 1, 2))
    onsets[:, 1] = period * np.arange(N + 1)
    onsets[0, 0] = initial_asynchrony
    Ts = np.zeros((N + 1, 2))
    Ts[:, 1] = period
    T = Ts[0, 0] = float(base_T)

    for n in range(1, N + 1):
        A = onsets[n - 1, 0] - onsets[n - 1, 1]
        T = T - beta * A
        ioi = T - alpha * A + rng.normal(0.0, sigma_T)
        if ioi <= 0:
            raise SimulationUnstable('Nonpositive IOI %g ms at step %d.' % (ioi, n), step=n)
        onsets[n, 0] = onsets[n - 1, 0] + ioi
        Ts[n, 0] = T

    alphas = np.tile([alpha, 0.0], (N, 1))
    betas = np.tile([beta, 0.0], (N, 1))
    logger.debug('Simulated a metronome performance N=%d, seed=%s.' % (N, seed))
    return OnsetTimeline(onsets), GroundTruth(2, alphas, betas, Ts)
