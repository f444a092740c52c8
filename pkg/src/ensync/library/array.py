import numpy
from numpy import ndarray

from ..interface import (Contract, ContractNotRespected, RValue, Where,
                         describe_type, eval_in_context, single_token)
from .comparison import CheckOrder


class Array(Contract):
    """ ``array[MxP](finite,>=0)``: a numpy array with optional shape and
        element-wise conditions. """

    def __init__(self, shape_contract=None, elements=None, where=None):
        Contract.__init__(self, where)
        assert shape_contract is None or isinstance(shape_contract, ShapeContract)
        self.shape_contract = shape_contract
        self.elements = elements or []

    def check_contract(self, context, value, silent):
        if not isinstance(value, ndarray):
            error = 'Expected an array, got a %s.' % describe_type(value)
            raise ContractNotRespected(contract=self, error=error,
                                       value=value, context=context)

        if self.shape_contract is not None:
            self.shape_contract._check_contract(context, value.shape, silent)

        for c in self.elements:
            c._check_contract(context, value, silent)

    def __str__(self):
        s = 'array'
        if self.shape_contract is not None:
            s += '[%s]' % self.shape_contract
        if self.elements:
            s += '(%s)' % ','.join(str(c) for c in self.elements)
        return s

    def __repr__(self):
        return 'Array(%r,%r)' % (self.shape_contract, self.elements)

    @staticmethod
    def parse_action(s, loc, tokens):
        shape_contract = single_token(tokens, 'shape_contract')
        elements = tokens.get('elements', None)
        if elements is not None:
            elements = list(elements)
        return Array(shape_contract, elements, where=Where(s, loc))


class ShapeContract(Contract):
    """ The ``MxP`` part; checks a shape tuple. """

    def __init__(self, dimensions, where=None):
        assert isinstance(dimensions, list)
        Contract.__init__(self, where)
        self.dimensions = dimensions

    def check_contract(self, context, value, silent):
        assert isinstance(value, tuple)  # Guaranteed by construction

        expected = len(self.dimensions)
        ndim = len(value)
        if ndim != expected:
            error = 'Expected %d dimensions, got %d.' % (expected, ndim)
            raise ContractNotRespected(contract=self, error=error,
                                       value=value, context=context)

        for i in range(expected):
            self.dimensions[i]._check_contract(context, value[i], silent)

    def __str__(self):
        return 'x'.join(str(x) for x in self.dimensions)

    def __repr__(self):
        return 'ShapeContract(%r)' % self.dimensions

    @staticmethod
    def parse_action(s, loc, tokens):
        dimensions = list(tokens)
        for t in dimensions:
            assert isinstance(t, Contract), 'Wrong token %r' % t
        return ShapeContract(dimensions, where=Where(s, loc))


class Finite(Contract):
    """ No NaN, no infinity. """

    def check_contract(self, context, value, silent):
        if not numpy.all(numpy.isfinite(value)):
            error = 'Expected finite entries; found %d non-finite.' % int(
                numpy.sum(~numpy.isfinite(value)))
            raise ContractNotRespected(self, error, value, context)

    def __str__(self):
        return 'finite'

    def __repr__(self):
        return 'Finite()'

    @staticmethod
    def parse_action(s, loc, tokens):
        return Finite(where=Where(s, loc))


class ArrayCompare(Contract):
    """ Element-wise ``>=0`` inside ``array(...)``. """

    def __init__(self, glyph, rvalue, where=None):
        assert glyph in CheckOrder.conditions
        assert isinstance(rvalue, RValue)
        Contract.__init__(self, where)
        self.glyph = glyph
        self.rvalue = rvalue

    def check_contract(self, context, value, silent):
        bound = eval_in_context(context, self.rvalue, self)
        ok = CheckOrder.conditions[self.glyph](value, bound)
        if not numpy.all(ok):
            error = ('Condition %s %s failed on %d of %d entries.' %
                     (self.glyph, bound, int(numpy.sum(~numpy.asarray(ok))),
                      numpy.size(value)))
            raise ContractNotRespected(self, error, value, context)

    def __str__(self):
        return '%s%s' % (self.glyph, self.rvalue)

    def __repr__(self):
        return 'ArrayCompare(%r,%r)' % (self.glyph, self.rvalue)

    @staticmethod
    def parse_action(s, loc, tokens):
        return ArrayCompare(tokens[0], tokens[1], where=Where(s, loc))
