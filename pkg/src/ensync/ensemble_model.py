"""
    The ensemble-synchronization state space.

    Observations are the inter-onset intervals (IOIs) of the K players;
    the hidden state stacks, for every step ``n``, ::

        theta_n = [ T_n (K) | r_n (K) | alpha_n (K(K-1)) | beta_n (K(K-1)) ]

    where T are the timekeeper intervals, r the IOIs and alpha/beta the
    phase/period correction gains of every ordered pair (i, j), i != j,
    in lexicographic order. Times are in milliseconds.
"""
import numpy as np
from scipy.linalg import block_diag

from . import check, check_multiple, contract, logger, new_contract
from .interface import ConfigError, ContractNotRespected
from .kalman_core import GaussianBelief, StepModel, TOL_PSD, predict, update
from .kalman_core import filter as kalman_filter
from .kalman_core import smooth as kalman_smooth
from .main import parse_contract_string
from .utils import raise_desc, raise_wrapped

__all__ = [
    'EnsembleConfig',
    'GainIndex',
    'HiddenStateLayout',
    'OnsetTimeline',
    'IoiSeries',
    'GainTrajectory',
    'OnlineEstimator',
    'pair_index',
    'asynchrony_vector',
    'build_observation_matrix',
    'build_transition_matrix',
    'build_process_cov',
    'build_obs_cov',
    'initial_state',
    'build_model',
    'extract_gains',
    'run_filter',
    'run_smoother',
    'smooth_performance',
    'gain_matrix',
]


class EnsembleConfig(object):
    """
        K plus every noise and initialization parameter.

        Variances are in ms^2. ``init_Tr_var=None`` means "same as
        ``sigma_T2``". Instances are immutable; use :py:meth:`replace`.
    """

    # name, contract, default
    FIELDS = [
        ('K', 'int,>=1', None),
        ('sigma_T2', 'float,>=0', 500.0),
        ('sigma_r2', 'float,>=0', 25.0),
        ('v_alpha', 'float,>=0', 1e-4),
        ('rho_alpha', 'float,>-1,<1', -0.1),
        ('v_beta', 'float,>=0', 0.0),
        ('rho_beta', 'float,>-1,<1', 0.0),
        ('obs_jitter', 'float,>=0', 1e-5),
        ('alpha_init', 'float', 0.25),
        ('beta_init', 'float', 0.0),
        ('init_gain_var', 'float,>=0', 1e-3),
        ('init_Tr_var', 'float,>=0|None', None),
    ]
    FIELD_NAMES = [f[0] for f in FIELDS]

    __slots__ = tuple(FIELD_NAMES)

    def __init__(self, K, **kwargs):
        values = dict((name, default) for name, _, default in EnsembleConfig.FIELDS)
        values['K'] = K
        for name in kwargs:
            if name not in values:
                raise ConfigError('Unknown configuration key %r; I know %s.' %
                                  (name, ', '.join(EnsembleConfig.FIELD_NAMES)))
        values.update(kwargs)

        for name, spec, _ in EnsembleConfig.FIELDS:
            value = values[name]
            if spec.startswith('float') and isinstance(value, (int, np.integer)) \
                    and not isinstance(value, bool):
                value = float(value)
            try:
                # Always checked, even with contracts disabled.
                parse_contract_string(spec).check(value)
            except ContractNotRespected as e:
                raise_wrapped(ConfigError, e, 'Invalid value for %r.' % name,
                              value=value)
            object.__setattr__(self, name, value)

        for which in ('alpha', 'beta'):
            v = getattr(self, 'v_' + which)
            rho = getattr(self, 'rho_' + which)
            if v > 0 and not compound_symmetry_is_pd(v, rho * v, self.K - 1):
                raise_desc(ConfigError,
                           'The %s process block is not positive definite: '
                           'need v(1-rho) > 0 and v(1+(K-2)rho) > 0.' % which,
                           K=self.K, v=v, rho=rho)

    def __setattr__(self, name, value):
        raise AttributeError('EnsembleConfig is immutable; use replace().')

    @property
    def tr_var(self):
        """ Prior variance of the T and r components. """
        return self.sigma_T2 if self.init_Tr_var is None else self.init_Tr_var

    def replace(self, **changes):
        values = self.as_dict()
        values.update(changes)
        return EnsembleConfig(**values)

    def as_dict(self):
        return dict((name, getattr(self, name)) for name in EnsembleConfig.FIELD_NAMES)

    def __eq__(self, other):
        return isinstance(other, EnsembleConfig) and self.as_dict() == other.as_dict()

    def __hash__(self):
        return hash(tuple(sorted(self.as_dict().items())))

    def __repr__(self):
        args = ', '.join('%s=%r' % (n, getattr(self, n)) for n in EnsembleConfig.FIELD_NAMES)
        return 'EnsembleConfig(%s)' % args


def compound_symmetry_is_pd(v, c, size):
    """ Eigenvalues of the size x size matrix with v on the diagonal and
        c elsewhere are v - c and v + (size - 1) c. """
    if size <= 0:
        return True
    if size == 1:
        return v > 0
    return (v - c) > 0 and (v + (size - 1) * c) > 0


class GainIndex(object):
    """ The lexicographic numbering of the ordered pairs (i, j), i != j,
        of performers 1..K. """

    def __init__(self, K):
        check('int,>=1', K)
        self.K = K
        self._pairs = [(i, j) for i in range(1, K + 1)
                       for j in range(1, K + 1) if i != j]

    def index(self, i, j):
        return pair_index(i, j, self.K)

    def pair(self, index):
        return self._pairs[index]

    def pairs_of(self, i):
        """ The K-1 pairs (i, j), in increasing j. """
        return self._pairs[(i - 1) * (self.K - 1): i * (self.K - 1)]

    def __len__(self):
        return len(self._pairs)

    def __iter__(self):
        return iter(self._pairs)


@contract(i='int,>=1', j='int,>=1', K='int,>=1')
def pair_index(i, j, K):
    """ Position of the gain of pair (i, j) in the alpha (or beta) block. """
    if i > K or j > K:
        raise_desc(ValueError, 'Performer out of range.', i=i, j=j, K=K)
    if i == j:
        raise_desc(ValueError, 'A performer has no gain towards itself.', i=i, j=j)
    rank = j - 1 if j < i else j - 2
    return (i - 1) * (K - 1) + rank


class HiddenStateLayout(object):
    """ Where T, r, alpha and beta live inside theta (length 2K^2). """

    def __init__(self, K):
        self.K = K
        npairs = K * (K - 1)
        self.T = slice(0, K)
        self.r = slice(K, 2 * K)
        self.alpha = slice(2 * K, 2 * K + npairs)
        self.beta = slice(2 * K + npairs, 2 * K + 2 * npairs)
        self.dim = 2 * K * K

    def scatter(self, alpha=None, beta=None, T=None, r=None):
        """ A theta vector with the given blocks (zeros elsewhere). """
        theta = np.zeros(self.dim)
        for sl, values in ((self.T, T), (self.r, r), (self.alpha, alpha), (self.beta, beta)):
            if values is not None:
                theta[sl] = values
        return theta

    def __repr__(self):
        return 'HiddenStateLayout(K=%d)' % self.K


class OnsetTimeline(object):
    """ Tone-onset times (ms), one column per player: ``onsets[n, i-1]``
        is t_{i,n} for n = 0..N. """

    __slots__ = ('onsets',)

    def __init__(self, onsets):
        onsets = np.array(onsets, dtype=float, ndmin=2)
        check('array[AxK](finite)', onsets, 'Onsets must be a finite (N+1)xK array.')
        if onsets.shape[0] < 1:
            raise ValueError('A timeline needs at least one onset per player.')
        if np.any(np.diff(onsets, axis=0) <= 0):
            n, i = np.argwhere(np.diff(onsets, axis=0) <= 0)[0]
            raise_desc(ValueError, 'Onsets must be strictly increasing per player.',
                       player=int(i) + 1, step=int(n) + 1)
        onsets.setflags(write=False)
        self.onsets = onsets

    @property
    def K(self):
        return self.onsets.shape[1]

    @property
    def N(self):
        return self.onsets.shape[0] - 1

    def prefix(self, n):
        """ The onsets at 0..n. """
        return OnsetTimeline(self.onsets[:n + 1])

    def scaled(self, gamma):
        return OnsetTimeline(self.onsets * gamma)

    def __eq__(self, other):
        return isinstance(other, OnsetTimeline) and np.array_equal(self.onsets, other.onsets)

    def __repr__(self):
        return 'OnsetTimeline(K=%d, N=%d)' % (self.K, self.N)


class IoiSeries(object):
    """ ``iois[n-1, i-1]`` is r_{i,n} = t_{i,n} - t_{i,n-1} (ms), for n = 1..N,
        plus the onsets t_{i,0} needed to recover asynchronies. """

    __slots__ = ('iois', 'initial_onsets')

    def __init__(self, iois, initial_onsets=None):
        iois = np.array(iois, dtype=float, ndmin=2)
        if initial_onsets is None:
            initial_onsets = np.zeros(iois.shape[1])
        initial_onsets = np.array(initial_onsets, dtype=float, ndmin=1)
        check_multiple([('array[NxK](finite)', iois), ('array[K](finite)', initial_onsets)],
                       'IOIs are NxK, initial onsets K.')
        if np.any(iois <= 0):
            n, i = np.argwhere(iois <= 0)[0]
            raise_desc(ValueError, 'IOIs must be positive.',
                       player=int(i) + 1, step=int(n) + 1, ioi=float(iois[n, i]))
        iois.setflags(write=False)
        initial_onsets.setflags(write=False)
        self.iois = iois
        self.initial_onsets = initial_onsets

    @property
    def K(self):
        return self.iois.shape[1]

    @property
    def N(self):
        return self.iois.shape[0]

    def to_timeline(self):
        """ Cumulative reconstruction of the onsets. """
        onsets = np.vstack([self.initial_onsets[None, :],
                            self.initial_onsets[None, :] + np.cumsum(self.iois, axis=0)])
        return OnsetTimeline(onsets)

    def __repr__(self):
        return 'IoiSeries(K=%d, N=%d)' % (self.K, self.N)


new_contract('config', EnsembleConfig, lambda c: (c.K,))
new_contract('timeline', OnsetTimeline, lambda t: (t.K,))
new_contract('iois', IoiSeries, lambda d: (d.K,))


@contract(timeline='timeline[K]', i='int,>=1,<=K', n='int,>=1')
def asynchrony_vector(timeline, i, n):
    """ [A_{ij,n-1} for j != i], with A_{ij,n-1} = t_{i,n-1} - t_{j,n-1}. """
    if n - 1 > timeline.N:
        raise_desc(ValueError, 'Step out of range.', n=n, N=timeline.N)
    t = timeline.onsets[n - 1]
    others = np.array([j for j in range(timeline.K) if j != i - 1], dtype=int)
    return t[i - 1] - t[others]


@contract(K='int,>=1,K', returns='array[Kx(2*K*K)]')
def build_observation_matrix(K):
    """ F = [0_K | I_K | 0 | 0]: the IOIs are observed directly. """
    layout = HiddenStateLayout(K)
    F = np.zeros((K, layout.dim))
    F[:, layout.r] = np.eye(K)
    return F


def coupling_block(timeline, n):
    """ blockdiag(-A_{1:,n-1}^T, ..., -A_{K:,n-1}^T), K x K(K-1). """
    K = timeline.K
    block = np.zeros((K, K * (K - 1)))
    for i in range(1, K + 1):
        block[i - 1, (i - 1) * (K - 1): i * (K - 1)] = -asynchrony_vector(timeline, i, n)
    return block


@contract(timeline_prefix='timeline[K]', K='int,>=1,K', n='int,>=1',
          returns='array[(2*K*K)x(2*K*K)](finite)')
def build_transition_matrix(timeline_prefix, K, n):
    """
        G_n, built from the onsets at n-1. Block rows ::

            T:     [ I  0  0      Cpl ]
            r:     [ I  0  Cpl    Cpl ]
            alpha: [ 0  0  I      0   ]
            beta:  [ 0  0  0      I   ]

        where Cpl is :py:func:`coupling_block`.
    """
    if n - 1 > timeline_prefix.N:
        raise_desc(ValueError, 'The onsets at n-1 are not available.',
                   n=n, available_up_to=timeline_prefix.N)
    layout = HiddenStateLayout(K)
    G = np.zeros((layout.dim, layout.dim))
    eye = np.eye(K)
    G[layout.T, layout.T] = eye
    G[layout.r, layout.T] = eye
    G[layout.alpha, layout.alpha] = np.eye(K * (K - 1))
    G[layout.beta, layout.beta] = np.eye(K * (K - 1))
    if K > 1:
        cpl = coupling_block(timeline_prefix, n)
        G[layout.T, layout.beta] = cpl
        G[layout.r, layout.alpha] = cpl
        G[layout.r, layout.beta] = cpl
    return G


def gain_block(v, rho, K):
    """ blockdiag over performers of the (K-1)x(K-1) compound-symmetric block. """
    size = K - 1
    if size <= 0:
        return np.zeros((0, 0))
    one = v * ((1.0 - rho) * np.eye(size) + rho * np.ones((size, size)))
    return block_diag(*([one] * K))


@contract(config='config[K]', returns='array[(2*K*K)x(2*K*K)]')
def build_process_cov(config):
    """ W = blockdiag(sigma_T2 I, sigma_r2 I, W^alpha, W^beta). """
    K = config.K
    W = block_diag(config.sigma_T2 * np.eye(K),
                   config.sigma_r2 * np.eye(K),
                   gain_block(config.v_alpha, config.rho_alpha, K),
                   gain_block(config.v_beta, config.rho_beta, K))
    return W.reshape(2 * K * K, 2 * K * K)


@contract(config='config[K]', returns='array[KxK]')
def build_obs_cov(config):
    """ V = obs_jitter I_K; a zero V would make the innovation covariance singular. """
    if config.obs_jitter <= 0:
        raise_desc(ConfigError, 'obs_jitter must be positive.', obs_jitter=config.obs_jitter)
    return config.obs_jitter * np.eye(config.K)


@contract(config='config[K]', first_iois='array[K](finite,>0)', returns='belief[(2*K*K)]')
def initial_state(config, first_iois):
    """ T and r start at the first IOI of each player, the gains at
        ``alpha_init`` / ``beta_init``; C_0 is diagonal. """
    K = config.K
    npairs = K * (K - 1)
    mean = np.concatenate([first_iois, first_iois,
                           np.full(npairs, config.alpha_init),
                           np.full(npairs, config.beta_init)])
    variances = np.concatenate([np.full(2 * K, config.tr_var),
                                np.full(2 * npairs, config.init_gain_var)])
    return GaussianBelief(mean, np.diag(variances))


@contract(data='iois[K]', config='config[K]')
def build_model(data, config):
    """
        :return: ``(init, steps, observations)`` ready for
                 :py:func:`ensync.kalman_core.filter`.
    """
    K = config.K
    timeline = data.to_timeline()
    F = build_observation_matrix(K)
    V = build_obs_cov(config)
    W = build_process_cov(config)
    steps = [StepModel(F, build_transition_matrix(timeline, K, n), V, W)
             for n in range(1, data.N + 1)]
    observations = [data.iois[n] for n in range(data.N)]
    init = initial_state(config, data.iois[0])
    return init, steps, observations


class GainTrajectory(object):
    """
        Per ordered pair, the (mean, variance) of alpha and beta at every step.

        Arrays are N x K(K-1), columns in :py:class:`GainIndex` order.
        ``smoothed[n]`` tells whether row n comes from the smoother.
    """

    def __init__(self, K, alpha_mean, alpha_var, beta_mean, beta_var, smoothed):
        self.K = K
        self.index = GainIndex(K)
        self.alpha_mean = np.asarray(alpha_mean, dtype=float)
        self.alpha_var = np.asarray(alpha_var, dtype=float)
        self.beta_mean = np.asarray(beta_mean, dtype=float)
        self.beta_var = np.asarray(beta_var, dtype=float)
        self.smoothed = np.asarray(smoothed, dtype=bool)
        for a in (self.alpha_var, self.beta_var):
            if a.size and np.min(a) < -TOL_PSD:
                raise ValueError('Negative gain variance %g.' % np.min(a))

    @property
    def N(self):
        return self.alpha_mean.shape[0]

    @property
    def mode(self):
        """ 'smoothed', 'filtered' or 'mixed'. """
        if self.smoothed.all():
            return 'smoothed'
        if not self.smoothed.any():
            return 'filtered'
        return 'mixed'

    def is_empty(self):
        return self.alpha_mean.shape[1] == 0

    def alpha(self, i, j):
        """ (means, variances) of alpha_ij over the steps. """
        c = pair_index(i, j, self.K)
        return self.alpha_mean[:, c], self.alpha_var[:, c]

    def beta(self, i, j):
        c = pair_index(i, j, self.K)
        return self.beta_mean[:, c], self.beta_var[:, c]

    def rows(self):
        """ ``(n, i, j, alpha_mean, alpha_var, beta_mean, beta_var, mode)``
            with n = 1..N and pairs in index order. """
        for n in range(self.N):
            mode = 'smoothed' if self.smoothed[n] else 'filtered'
            for c, (i, j) in enumerate(self.index):
                yield (n + 1, i, j,
                       self.alpha_mean[n, c], self.alpha_var[n, c],
                       self.beta_mean[n, c], self.beta_var[n, c], mode)

    def __repr__(self):
        return 'GainTrajectory(K=%d, N=%d, mode=%s)' % (self.K, self.N, self.mode)


def gain_matrix(trajectory, n, which='alpha'):
    """ K x K view of the gain means at step n (1-based); NaN diagonal. """
    check('int,>=1', n)
    means = {'alpha': trajectory.alpha_mean, 'beta': trajectory.beta_mean}[which]
    K = trajectory.K
    M = np.full((K, K), np.nan)
    for c, (i, j) in enumerate(trajectory.index):
        M[i - 1, j - 1] = means[n - 1, c]
    return M


def extract_gains(beliefs, K, smoothed):
    """ Reads the gain marginals out of a sequence of beliefs over theta. """
    layout = HiddenStateLayout(K)
    means = np.array([b.mean for b in beliefs]).reshape(len(beliefs), layout.dim)
    variances = np.array([np.diag(b.covariance) for b in beliefs]).reshape(len(beliefs), layout.dim)
    return GainTrajectory(K,
                          means[:, layout.alpha], variances[:, layout.alpha],
                          means[:, layout.beta], variances[:, layout.beta],
                          np.full(len(beliefs), bool(smoothed)))


@contract(data='iois[K]', config='config[K]')
def run_filter(data, config):
    """
        Filters a performance.

        :return: ``(filter_steps, trajectory)``
    """
    if data.N < 1:
        raise ValueError('A performance needs at least one IOI.')
    init, steps, observations = build_model(data, config)
    filter_steps = kalman_filter(init, steps, observations)
    trajectory = extract_gains([fs.posterior for fs in filter_steps], config.K, smoothed=False)
    logger.info('Filtered K=%d, N=%d.' % (config.K, data.N))
    return filter_steps, trajectory


@contract(data='iois[K]', config='config[K]')
def run_smoother(data, config):
    """
        Filters, then smooths backwards.

        :return: ``(smoothed_steps, trajectory)``
    """
    _, smoothed, trajectory = smooth_performance(data, config)
    return smoothed, trajectory


@contract(data='iois[K]', config='config[K]')
def smooth_performance(data, config):
    """ Like :py:func:`run_smoother`, also returning the filter output.

        :return: ``(filter_steps, smoothed_steps, trajectory)``
    """
    if data.N < 1:
        raise ValueError('A performance needs at least one IOI.')
    init, steps, observations = build_model(data, config)
    filter_steps = kalman_filter(init, steps, observations)
    smoothed = kalman_smooth(filter_steps, steps)
    trajectory = extract_gains([s.smoothed for s in smoothed], config.K, smoothed=True)
    logger.info('Smoothed K=%d, N=%d.' % (config.K, data.N))
    return filter_steps, smoothed, trajectory


class OnlineEstimator(object):
    """
        Filtering one onset vector at a time, as the performance unfolds.

        Feeding the onsets t_1..t_N after constructing with t_0 gives the
        same posteriors as :py:func:`run_filter` on the same data.
    """

    def __init__(self, config, initial_onsets):
        initial_onsets = np.array(initial_onsets, dtype=float, ndmin=1)
        check('array[K](finite)', initial_onsets, K=config.K)
        self.config = config
        self._onsets = [initial_onsets]
        self._F = build_observation_matrix(config.K)
        self._V = build_obs_cov(config)
        self._W = build_process_cov(config)
        self._posterior = None
        self.history = []

    @property
    def n(self):
        """ Number of onset vectors consumed. """
        return len(self.history)

    def push(self, onsets):
        """ Consumes t_n; returns the :py:class:`FilterStep` of step n. """
        onsets = np.array(onsets, dtype=float, ndmin=1)
        check('array[K](finite)', onsets, K=self.config.K)
        previous = self._onsets[-1]
        iois = onsets - previous
        if np.any(iois <= 0):
            raise_desc(ValueError, 'Onsets must be strictly increasing per player.',
                       previous=previous, onsets=onsets)
        if self._posterior is None:
            self._posterior = initial_state(self.config, iois)
        n = len(self._onsets)
        K = self.config.K
        G = build_transition_matrix(OnsetTimeline(np.array(self._onsets)), K, n)
        step = StepModel(self._F, G, self._V, self._W)
        prior, f, Q = predict(self._posterior, step)
        fs = update(prior, f, Q, self._F, iois, step_index=n - 1)
        self._onsets.append(onsets)
        self._posterior = fs.posterior
        self.history.append(fs)
        return fs

    def current_gains(self, which='alpha'):
        """ K x K matrix of the latest filtered gain means. """
        if not self.history:
            raise ValueError('No onsets pushed yet.')
        return gain_matrix(self.trajectory(), self.n, which)

    def trajectory(self):
        return extract_gains([fs.posterior for fs in self.history], self.config.K,
                             smoothed=False)
