from numpy import ndarray

from ..interface import (Contract, ContractNotRespected, Where, describe_type,
                         single_token)


class Seq(Contract):
    """ ``seq[N](contract)``: a list or tuple of N elements, each checked
        against the inner contract in the shared context. """

    def __init__(self, length=None, elements=None, where=None):
        assert length is None or isinstance(length, Contract), length
        assert elements is None or isinstance(elements, Contract), elements
        Contract.__init__(self, where)
        self.length = length
        self.elements = elements

    def check_contract(self, context, value, silent):
        if isinstance(value, (str, ndarray)) or not isinstance(value, (list, tuple)):
            error = 'Expected a list or tuple, got a %s.' % describe_type(value)
            raise ContractNotRespected(self, error, value, context)

        if self.length is not None:
            self.length._check_contract(context, len(value), silent)

        if self.elements is not None:
            for element in value:
                self.elements._check_contract(context, element, silent)

    def __str__(self):
        s = 'seq'
        if self.length is not None:
            s += '[%s]' % self.length
        if self.elements is not None:
            s += '(%s)' % self.elements
        return s

    def __repr__(self):
        return 'Seq(%r,%r)' % (self.length, self.elements)

    @staticmethod
    def parse_action(s, loc, tokens):
        length = single_token(tokens, 'length')
        elements = single_token(tokens, 'elements')
        return Seq(length, elements, where=Where(s, loc))
