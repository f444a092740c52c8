import numpy as np

from ..interface import ContractNotRespected, ContractSyntaxError, describe_value
from ..kalman_core import GaussianBelief, StepModel
from ..main import check_contracts, parse_contract_string


def check_contracts_ok(contract, value, **context):
    if isinstance(contract, str):
        contract = [contract]
        value = [value]
    context = check_contracts(contract, value, context)

    assert isinstance(context, dict)
    "%s" % context
    "%r" % context
    return context


def check_contracts_fail(contract, value, error=ContractNotRespected, **context):
    """ Returns the exception """
    if isinstance(contract, str):
        contract = [contract]
        value = [value]

    try:
        context = check_contracts(contract, value, context)

        msg = ('I was expecting that the values would not'
               ' satisfy the contract.\n')

        for v in value:
            msg += '      value: %s\n' % describe_value(v)

        for c in contract:
            cp = parse_contract_string(c)
            msg += '   contract: %r, parsed as %r (%s)\n' % (c, cp, cp)

        msg += '    context:  %r\n' % context

        raise Exception(msg)

    except error as e:
        # Try generation of strings:
        s = "%r" % e  # @UnusedVariable
        s = "%s" % e  # @UnusedVariable
        return e


def check_syntax_fail(string):
    assert isinstance(string, str)

    try:
        parsed_contract = parse_contract_string(string)
        msg = 'I would not expect to parse %r.' % string
        msg += ' contract:         %s\n' % parsed_contract
        raise Exception(msg)

    except ContractSyntaxError as e:
        # Try generation of strings:
        s = "%r" % e  # @UnusedVariable
        s = "%s" % e  # @UnusedVariable
        return e


def random_spd(rng, n, floor=0.1):
    """ A well-conditioned symmetric positive definite n x n matrix. """
    B = rng.standard_normal((n, n))
    return B @ B.T / n + floor * np.eye(n)


def random_model(rng, p, m, N, static=0):
    """
        A random linear-Gaussian model: ``(init, steps, observations)``.

        The last ``static`` state components have no process noise, no
        initial uncertainty and an identity row in G, so that the prior
        covariances of the chain are singular.
    """
    free = p - static
    C0 = np.zeros((p, p))
    C0[:free, :free] = random_spd(rng, free, 0.5)
    init = GaussianBelief(rng.standard_normal(p), C0)
    steps = []
    for _ in range(N):
        G = rng.standard_normal((p, p)) / np.sqrt(p)
        G[free:] = 0.0
        G[free:, free:] = np.eye(static)
        W = np.zeros((p, p))
        W[:free, :free] = random_spd(rng, free)
        F = rng.standard_normal((m, p))
        V = random_spd(rng, m)
        steps.append(StepModel(F, G, V, W))
    observations = [2.0 * rng.standard_normal(m) for _ in range(N)]
    return init, steps, observations
