from numbers import Integral, Real

import numpy

from ..interface import Contract, ContractNotRespected, Where, describe_type


def _is_int(x):
    return isinstance(x, (Integral, numpy.integer)) and not isinstance(x, bool)


def _is_float(x):
    return isinstance(x, (Real, numpy.floating)) and not isinstance(x, bool)


class CheckType(Contract):
    """ One of the scalar keywords: ``int``, ``float``, ``str``, ``None``. """

    predicates = {
        'int': _is_int,
        'float': _is_float,
        'str': lambda x: isinstance(x, str),
        'None': lambda x: x is None,
    }

    def __init__(self, name, where=None):
        assert name in CheckType.predicates, name
        Contract.__init__(self, where)
        self.name = name

    def check_contract(self, context, value, silent):
        if not CheckType.predicates[self.name](value):
            error = 'Expected %s, got %s.' % (self.name, describe_type(value))
            raise ContractNotRespected(self, error, value, context)

    def __repr__(self):
        return 'CheckType(%r)' % self.name

    def __str__(self):
        return self.name

    @staticmethod
    def parse_action(s, loc, tokens):
        return CheckType(tokens[0], where=Where(s, loc))

