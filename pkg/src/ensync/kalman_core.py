"""
    Linear-Gaussian state-space filtering and smoothing.

    The model is ::

        y_n     = F_n theta_n     + v_n,    v_n ~ N(0, V_n)
        theta_n = G_n theta_{n-1} + w_n,    w_n ~ N(0, W_n)

    with ``theta_0 ~ N(k_0, C_0)``. Nothing in this module knows about
    music ensembles; see :py:mod:`ensync.ensemble_model` for that.

    All functions are pure: they never modify their inputs.
"""
import math

import numpy as np
from scipy.linalg import LinAlgError, cho_factor, cho_solve

from . import check, check_multiple, contract, logger, new_contract
from .enabling import all_disabled
from .interface import (ContractNotRespected, DegenerateInnovationCovariance,
                        DegeneratePriorCovariance, NotPositiveDefinite)
from .utils import format_obs

__all__ = [
    'GaussianBelief',
    'StepModel',
    'FilterStep',
    'SmoothedStep',
    'predict',
    'update',
    'filter',
    'smooth',
    'forecast',
    'innovation_loglik',
    'symmetrize',
    'TOL_SINGULAR',
    'TOL_PSD',
    'TOL_NUM',
    'SMOOTHER_JITTER',
]

# Condition numbers above 1/TOL_SINGULAR make a covariance "degenerate".
TOL_SINGULAR = 1e-12
# Smallest eigenvalue a PSD matrix may have.
TOL_PSD = 1e-9
TOL_NUM = 1e-9
SMOOTHER_JITTER = 1e-10


def symmetrize(M):
    """ (M + M^T) / 2; exactly symmetric in floating point. """
    return (M + M.T) / 2.0


def min_eigenvalue(M):
    if M.size == 0:
        return 0.0
    return float(np.linalg.eigvalsh(M)[0])


def check_psd(M, what, tol=TOL_PSD):
    """ Raises NotPositiveDefinite if the smallest eigenvalue is below -tol. """
    lam = min_eigenvalue(M)
    if lam < -tol:
        msg = '%s is not positive semi-definite (min eigenvalue %g).' % (what, lam)
        raise NotPositiveDefinite(msg)


class GaussianBelief(object):
    """ Mean and covariance of the hidden state. The covariance is
        symmetrized on construction. """

    __slots__ = ('mean', 'covariance')

    def __init__(self, mean, covariance):
        mean = np.array(mean, dtype=float, ndmin=1)
        covariance = np.array(covariance, dtype=float, ndmin=2)
        if mean.size == 0:
            covariance = covariance.reshape(0, 0)
        check_multiple([('array[P](finite)', mean),
                        ('array[PxP](finite)', covariance)],
                       'A belief needs a P-vector and a PxP covariance.')
        mean.setflags(write=False)
        covariance = symmetrize(covariance)
        covariance.setflags(write=False)
        self.mean = mean
        self.covariance = covariance

    @property
    def dim(self):
        return self.mean.shape[0]

    def variances(self):
        """ The marginal variances (diagonal of the covariance). """
        return np.diag(self.covariance).copy()

    def marginal(self, indices):
        """ The belief over the components ``indices``. """
        idx = np.asarray(indices, dtype=int)
        return GaussianBelief(self.mean[idx], self.covariance[np.ix_(idx, idx)])

    def is_psd(self, tol=TOL_PSD):
        return min_eigenvalue(self.covariance) >= -tol

    def __eq__(self, other):
        return (isinstance(other, GaussianBelief) and
                np.array_equal(self.mean, other.mean) and
                np.array_equal(self.covariance, other.covariance))

    def __repr__(self):
        return 'GaussianBelief(mean=%r, covariance=%r)' % (self.mean, self.covariance)


class StepModel(object):
    """ The quadruple (F_n, G_n, V_n, W_n) of one step. """

    __slots__ = ('F', 'G', 'V', 'W')

    def __init__(self, F, G, V, W):
        F = np.array(F, dtype=float, ndmin=2)
        G = np.array(G, dtype=float, ndmin=2)
        V = np.array(V, dtype=float, ndmin=2)
        W = np.array(W, dtype=float, ndmin=2)
        check_multiple([('array[MxP](finite)', F),
                        ('array[PxP](finite)', G),
                        ('array[MxM](finite)', V),
                        ('array[PxP](finite)', W)],
                       'Inconsistent step model: F is MxP, G and W PxP, V MxM.')
        if not all_disabled():
            for name, M in (('V', V), ('W', W)):
                if np.max(np.abs(M - M.T), initial=0.0) > TOL_PSD * max(1.0, np.max(np.abs(M), initial=0.0)):
                    raise NotPositiveDefinite('%s is not symmetric.' % name)
                check_psd(M, name)
        self.F = F
        self.G = G
        self.V = symmetrize(V)
        self.W = symmetrize(W)

    @property
    def obs_dim(self):
        return self.F.shape[0]

    @property
    def state_dim(self):
        return self.G.shape[0]

    def __repr__(self):
        return 'StepModel(m=%d, p=%d)' % (self.obs_dim, self.state_dim)


class FilterStep(object):
    """ Everything the filter computes at one step. """

    __slots__ = ('prior', 'obs_pred_mean', 'obs_pred_cov', 'innovation', 'posterior')

    def __init__(self, prior, obs_pred_mean, obs_pred_cov, innovation, posterior):
        self.prior = prior
        self.obs_pred_mean = obs_pred_mean
        self.obs_pred_cov = obs_pred_cov
        self.innovation = innovation
        self.posterior = posterior

    @property
    def obs_dim(self):
        return self.obs_pred_mean.shape[0]

    @property
    def state_dim(self):
        return self.prior.dim

    def __repr__(self):
        return 'FilterStep(m=%d, p=%d)' % (self.obs_dim, self.state_dim)


class SmoothedStep(object):
    """ p(theta_n | y_{1:N}). ``jittered`` is True when the backward solve
        at this step needed the diagonal jitter. """

    __slots__ = ('smoothed', 'jittered')

    def __init__(self, smoothed, jittered=False):
        self.smoothed = smoothed
        self.jittered = jittered

    @property
    def dim(self):
        return self.smoothed.dim

    def __repr__(self):
        return 'SmoothedStep(p=%d, jittered=%s)' % (self.dim, self.jittered)


new_contract('belief', GaussianBelief, lambda b: (b.dim,))
new_contract('step', StepModel, lambda s: (s.obs_dim, s.state_dim))
new_contract('filterstep', FilterStep, lambda f: (f.obs_dim, f.state_dim))
new_contract('smoothedstep', SmoothedStep, lambda s: (s.dim,))


def _factorize(M, what, step, error):
    """ Cholesky factor of M, refusing ill-conditioned matrices. """
    if M.size == 0:
        return None
    cond = np.linalg.cond(M)
    if not np.isfinite(cond) or cond > 1.0 / TOL_SINGULAR:
        msg = ('degenerate %s at step %s (condition number %.3g).' %
               (what, step, cond))
        raise error(msg + '\n' + format_obs(dict(matrix=M)), step=step)
    try:
        return cho_factor(M, lower=True, check_finite=False)
    except LinAlgError:
        msg = 'degenerate %s at step %s (not positive definite).' % (what, step)
        raise error(msg + '\n' + format_obs(dict(matrix=M)), step=step) from None


def _solve(factor, B):
    """ M^{-1} B given the Cholesky factor of M. """
    if factor is None:
        return np.zeros_like(B)
    return cho_solve(factor, B, check_finite=False)


@contract(prev_posterior='belief[P]', step='step[MxP]')
def predict(prev_posterior, step):
    """
        Prediction step for hidden and observed variables.

        :return: ``(prior, obs_pred_mean, obs_pred_cov)`` with
                 ``prior = N(G k, G C G^T + W)`` and the observation
                 prediction ``N(F a, F R F^T + V)``.
    """
    G, F = step.G, step.F
    a = G @ prev_posterior.mean
    R = G @ prev_posterior.covariance @ G.T + step.W
    prior = GaussianBelief(a, R)
    f = F @ prior.mean
    Q = symmetrize(F @ prior.covariance @ F.T + step.V)
    return prior, f, Q


def forecast(posterior, step):
    """ One-step-ahead predictive distribution ``(f, Q)`` of the next
        observation, given the current posterior. """
    _, f, Q = predict(posterior, step)
    return f, Q


@contract(prior='belief[P]', obs_pred_mean='array[M]', obs_pred_cov='array[MxM]',
          F='array[MxP]', y='array[M](finite)', returns='filterstep[MxP]')
def update(prior, obs_pred_mean, obs_pred_cov, F, y, step_index=None):
    """
        Update step: compares the prediction with the measurement ``y``.

        The gain ``R F^T Q^{-1}`` is obtained by a Cholesky solve against Q.

        :raise: DegenerateInnovationCovariance if Q is singular or
                its condition number exceeds 1/TOL_SINGULAR.
    """
    a, R = prior.mean, prior.covariance
    e = y - obs_pred_mean
    factor = _factorize(obs_pred_cov, 'innovation covariance', step_index,
                        DegenerateInnovationCovariance)
    # Q is symmetric, so (Q^{-1} F R)^T = R F^T Q^{-1}.
    gain = _solve(factor, F @ R).T
    k = a + gain @ e
    C = R - gain @ (F @ R)
    posterior = GaussianBelief(k, C)
    if not all_disabled():
        check_psd(posterior.covariance, 'posterior covariance at step %s' % step_index)
    return FilterStep(prior, obs_pred_mean, obs_pred_cov, e, posterior)


@contract(init='belief[P]', steps='seq[N](step[MxP])', observations='seq[N](array[M])')
def filter(init, steps, observations):  # @ReservedAssignment
    """
        Runs the filtering equations over ``N`` steps.

        Step ``n`` uses ``steps[n]`` and ``observations[n]``.

        :return: list of N :py:class:`FilterStep`
    """
    check('int,>=1', len(steps), 'The filter needs at least one step.')
    results = []
    posterior = init
    for n, (step, y) in enumerate(zip(steps, observations)):
        try:
            prior, f, Q = predict(posterior, step)
            fs = update(prior, f, Q, step.F, np.asarray(y, dtype=float), step_index=n)
        except ContractNotRespected as e:
            e.error = 'At step %d:\n%s' % (n, e.error)
            raise
        except NotPositiveDefinite as e:
            raise NotPositiveDefinite('At step %d: %s' % (n, e)) from e
        results.append(fs)
        posterior = fs.posterior
    logger.debug('Filtered %d steps (p=%d, m=%d).' %
                 (len(results), init.dim, steps[0].obs_dim))
    return results


@contract(filter_steps='seq[N](filterstep[MxP])', steps='seq[N](step[MxP])')
def smooth(filter_steps, steps, jitter=SMOOTHER_JITTER):
    """
        Backward recursion giving ``p(theta_n | y_{1:N})`` for every step.

        If ``R_{n+1}`` is degenerate (typically because W has null
        blocks) and ``jitter`` is positive, ``jitter * I`` is added to it
        for the solve only, and the step is marked ``jittered``.
        With ``jitter=0`` a degenerate ``R_{n+1}`` is an error.

        :raise: DegeneratePriorCovariance
    """
    check('int,>=1', len(filter_steps), 'The smoother needs at least one step.')
    N = len(filter_steps)
    out = [None] * N
    last = filter_steps[-1].posterior
    out[-1] = SmoothedStep(GaussianBelief(last.mean, last.covariance))
    s, S = last.mean, last.covariance
    njittered = 0
    for n in range(N - 2, -1, -1):
        nxt = filter_steps[n + 1]
        a1, R1 = nxt.prior.mean, nxt.prior.covariance
        k, C = filter_steps[n].posterior.mean, filter_steps[n].posterior.covariance
        G = steps[n + 1].G
        factor, jittered = _factorize_prior(R1, n + 1, jitter)
        # J = C G^T R^{-1}
        J = _solve(factor, G @ C).T
        s = k + J @ (s - a1)
        S = symmetrize(C - J @ (R1 - S) @ J.T)
        out[n] = SmoothedStep(GaussianBelief(s, S), jittered)
        njittered += jittered
    if njittered:
        logger.warning('Smoother added a %g diagonal jitter at %d of %d steps.' %
                       (jitter, njittered, N))
    return out


def _factorize_prior(R, step, jitter):
    try:
        return _factorize(R, 'prior covariance in smoother', step,
                          DegeneratePriorCovariance), False
    except DegeneratePriorCovariance:
        if not jitter or jitter <= 0:
            raise
    Rj = R + jitter * np.eye(R.shape[0])
    try:
        return cho_factor(Rj, lower=True, check_finite=False), True
    except LinAlgError:
        msg = ('degenerate prior covariance in smoother at step %s, '
               'even after a %g jitter.' % (step, jitter))
        raise DegeneratePriorCovariance(msg, step=step) from None


@contract(filter_steps='seq[N](filterstep[MxP])')
def innovation_loglik(filter_steps):
    """
        Sum over steps of ``log N(e_n; 0, Q_n)``.

        :raise: NotPositiveDefinite if some Q_n is not positive definite.
    """
    total = 0.0
    for n, fs in enumerate(filter_steps):
        Q, e = fs.obs_pred_cov, fs.innovation
        m = e.shape[0]
        if m == 0:
            continue
        try:
            c, lower = cho_factor(Q, lower=True, check_finite=False)
        except LinAlgError:
            msg = 'Innovation covariance at step %d is not positive definite.' % n
            raise NotPositiveDefinite(msg) from None
        logdet = 2.0 * float(np.sum(np.log(np.diag(c))))
        quad = float(e @ cho_solve((c, lower), e, check_finite=False))
        total += -0.5 * (m * math.log(2 * math.pi) + logdet + quad)
    return total
