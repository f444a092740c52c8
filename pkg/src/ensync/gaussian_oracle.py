"""
    Exact inference by brute force: the whole chain
    ``(theta_0, ..., theta_N, y_1, ..., y_N)`` as one explicit Gaussian,
    conditioned directly on the observations.

    Cubic in the number of stacked variables; only meant for checking
    :py:mod:`ensync.kalman_core` on small instances.
"""
import numpy as np
from numpy.linalg import LinAlgError
from scipy.linalg import block_diag, cho_factor, cho_solve

from . import contract, logger
from .interface import DegenerateCovariance, OracleSizeError
from .kalman_core import GaussianBelief, symmetrize
from .utils import raise_desc

__all__ = [
    'JointGaussian',
    'build_joint',
    'condition_on_observations',
    'filtered_posteriors',
    'smoothed_posteriors',
    'MAX_JOINT_SIZE',
]

MAX_JOINT_SIZE = 400
OBSERVED_JITTER = 1e-12


class JointGaussian(object):
    """
        Mean and covariance over ``(theta_0, ..., theta_N, y_1, ..., y_N)``;
        dimension ``(N+1) p + N m``.
    """

    def __init__(self, mean, covariance, p, m, N):
        self.mean = mean
        self.covariance = symmetrize(covariance)
        self.p = p
        self.m = m
        self.N = N
        assert self.mean.shape == (self.dim,)
        assert self.covariance.shape == (self.dim, self.dim)

    @property
    def dim(self):
        return (self.N + 1) * self.p + self.N * self.m

    def state_slice(self, n):
        """ Where ``theta_n`` lives, n = 0..N. """
        return slice(n * self.p, (n + 1) * self.p)

    def obs_slice(self, n):
        """ Where ``y_n`` lives, n = 1..N. """
        base = (self.N + 1) * self.p
        return slice(base + (n - 1) * self.m, base + n * self.m)

    def marginal_state(self, n):
        sl = self.state_slice(n)
        return GaussianBelief(self.mean[sl], self.covariance[sl, sl])

    def __repr__(self):
        return 'JointGaussian(p=%d, m=%d, N=%d)' % (self.p, self.m, self.N)


@contract(init='belief[P]', steps='seq[N](step[MxP])')
def build_joint(init, steps):
    """
        Writes every variable as a linear map of the independent sources
        ``(theta_0, w_1..w_N, v_1..v_N)`` and propagates the moments.

        :raise: OracleSizeError if the joint would exceed MAX_JOINT_SIZE.
    """
    N = len(steps)
    p = init.dim
    m = steps[0].obs_dim if N else 0
    size = (N + 1) * p + N * m
    if size > MAX_JOINT_SIZE:
        raise_desc(OracleSizeError, 'The joint would have %d > %d variables.'
                   % (size, MAX_JOINT_SIZE), p=p, m=m, N=N)

    # sources: theta_0 (p), w_n (p each), v_n (m each)
    nsrc = p + N * p + N * m
    source_cov = block_diag(init.covariance,
                            *([s.W for s in steps] + [s.V for s in steps]))
    source_cov = source_cov.reshape(nsrc, nsrc)

    def w_slice(n):
        return slice(p + (n - 1) * p, p + n * p)

    def v_slice(n):
        return slice(p + N * p + (n - 1) * m, p + N * p + n * m)

    L = np.zeros((size, nsrc))
    mean = np.zeros(size)
    joint_slices = JointGaussian(np.zeros(size), np.zeros((size, size)), p, m, N)

    theta_L = np.zeros((p, nsrc))
    theta_L[:, :p] = np.eye(p)
    theta_mean = init.mean.copy()
    L[joint_slices.state_slice(0)] = theta_L
    mean[joint_slices.state_slice(0)] = theta_mean

    for n, step in enumerate(steps, start=1):
        theta_L = step.G @ theta_L
        theta_L[:, w_slice(n)] += np.eye(p)
        theta_mean = step.G @ theta_mean
        y_L = step.F @ theta_L
        y_L[:, v_slice(n)] += np.eye(m)
        L[joint_slices.state_slice(n)] = theta_L
        L[joint_slices.obs_slice(n)] = y_L
        mean[joint_slices.state_slice(n)] = theta_mean
        mean[joint_slices.obs_slice(n)] = step.F @ theta_mean

    covariance = L @ source_cov @ L.T
    logger.debug('Built a joint Gaussian of dimension %d.' % size)
    return JointGaussian(mean, covariance, p, m, N)


def condition_on_observations(joint, y, upto=None):
    """
        Conditions the joint on ``y_1..y_upto`` (default: all N).

        :return: the N+1 beliefs ``p(theta_n | y_1..y_upto)``, n = 0..N
        :raise: DegenerateCovariance if the observed block is singular
                even after a 1e-12 jitter.
    """
    if upto is None:
        upto = joint.N
    if len(y) < upto:
        raise_desc(ValueError, 'Not enough observations.', given=len(y), upto=upto)
    nstate = (joint.N + 1) * joint.p
    states = slice(0, nstate)
    if upto == 0:
        return [joint.marginal_state(n) for n in range(joint.N + 1)]
    obs = slice(nstate, nstate + upto * joint.m)

    mu_x, mu_y = joint.mean[states], joint.mean[obs]
    S = joint.covariance
    Sxx, Sxy, Syy = S[states, states], S[states, obs], S[obs, obs]
    yv = np.concatenate([np.asarray(y[n], dtype=float) for n in range(upto)])

    factor = _factor_observed(Syy)
    gain = cho_solve(factor, Sxy.T).T
    mean = mu_x + gain @ (yv - mu_y)
    cov = symmetrize(Sxx - gain @ Sxy.T)

    p = joint.p
    return [GaussianBelief(mean[n * p:(n + 1) * p], cov[n * p:(n + 1) * p, n * p:(n + 1) * p])
            for n in range(joint.N + 1)]


def _factor_observed(Syy):
    try:
        return cho_factor(Syy, lower=True)
    except LinAlgError:
        pass
    try:
        return cho_factor(Syy + OBSERVED_JITTER * np.eye(Syy.shape[0]), lower=True)
    except LinAlgError:
        raise DegenerateCovariance('Singular observation block in the joint.') from None


def filtered_posteriors(joint, y):
    """ ``p(theta_n | y_1..y_n)`` for n = 1..N, in the filter's order. """
    return [condition_on_observations(joint, y, upto=n)[n] for n in range(1, joint.N + 1)]


def smoothed_posteriors(joint, y):
    """ ``p(theta_n | y_1..y_N)`` for n = 1..N, in the smoother's order. """
    return condition_on_observations(joint, y)[1:]
