import operator
from numbers import Number

import numpy

from ..interface import (Contract, ContractNotRespected, RValue, Where,
                         describe_type, eval_in_context)


class CheckOrder(Contract):
    """ ``>0``, ``<=N`` and friends, against a scalar value. """

    conditions = {
        '>=': operator.ge,
        '<=': operator.le,
        '!=': operator.ne,
        '==': operator.eq,
        '>': operator.gt,
        '<': operator.lt,
    }

    def __init__(self, glyph, rvalue, where=None):
        assert glyph in CheckOrder.conditions
        assert isinstance(rvalue, RValue)
        Contract.__init__(self, where)
        self.glyph = glyph
        self.rvalue = rvalue

    def check_contract(self, context, value, silent):
        if not isinstance(value, (Number, numpy.number)):
            error = ('Cannot compare a %s with %s.' %
                     (describe_type(value), self.rvalue))
            raise ContractNotRespected(self, error, value, context)
        bound = eval_in_context(context, self.rvalue, self)
        if not CheckOrder.conditions[self.glyph](value, bound):
            error = 'Condition %s %s %s not respected.' % (value, self.glyph, bound)
            raise ContractNotRespected(self, error, value, context)

    def __repr__(self):
        return 'CheckOrder(%r,%r)' % (self.glyph, self.rvalue)

    def __str__(self):
        return '%s%s' % (self.glyph, self.rvalue)

    @staticmethod
    def parse_action(s, loc, tokens):
        return CheckOrder(tokens[0], tokens[1], where=Where(s, loc))
