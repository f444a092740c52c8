from numbers import Integral, Number

from ..interface import (Contract, ContractNotRespected, RValue, Where,
                         describe_value, eval_in_context)


class BindVariable(Contract):
    """ An upper-case letter: binds an integer the first time it is seen,
        afterwards requires the same value. """

    def __init__(self, variable, where=None):
        assert isinstance(variable, str) and len(variable) == 1
        Contract.__init__(self, where)
        self.variable = variable

    def check_contract(self, context, value, silent):
        if self.variable in context:
            expected = context[self.variable]
            if not (expected == value):
                error = ('Expected value for %r was: %s\n'
                         '        instead I received: %s' %
                         (self.variable, describe_value(expected),
                          describe_value(value)))
                raise ContractNotRespected(contract=self, error=error,
                                           value=value, context=context)
        else:
            if not isinstance(value, Integral) or isinstance(value, bool):
                error = ('Variable %r can only bind to int, not %r.' %
                         (self.variable, value.__class__.__name__))
                raise ContractNotRespected(self, error, value, context)
            context[self.variable] = int(value)

    def __str__(self):
        return self.variable

    def __repr__(self):
        return 'BindVariable(%r)' % self.variable

    @staticmethod
    def parse_action(s, loc, tokens):
        return BindVariable(tokens[0], where=Where(s, loc))


class EqualTo(Contract):
    """ The value must equal the given r-value. """

    def __init__(self, rvalue, where=None):
        assert isinstance(rvalue, RValue)
        Contract.__init__(self, where)
        self.rvalue = rvalue

    def check_contract(self, context, value, silent):
        val = eval_in_context(context, self.rvalue, self)
        if not (val == value):
            error = 'Expected %s, got %r.' % (val, value)
            raise ContractNotRespected(self, error, value, context)

    def __str__(self):
        s = str(self.rvalue)
        if isinstance(self.rvalue, Binary):
            return '(%s)' % s
        return s

    def __repr__(self):
        return 'EqualTo(%r)' % self.rvalue

    @staticmethod
    def parse_action(s, loc, tokens):
        return EqualTo(tokens[0], where=Where(s, loc))


class VariableRef(RValue):

    def __init__(self, variable, where=None):
        assert isinstance(variable, str)
        self.where = where
        self.variable = variable

    def eval(self, context):
        var = self.variable
        if var not in context:
            raise ValueError('Unknown variable %r.' % var)
        return context[var]

    def __repr__(self):
        return "VariableRef(%r)" % self.variable

    def __str__(self):
        return self.variable

    @staticmethod
    def parse_action(s, loc, tokens):
        return VariableRef(tokens[0], where=Where(s, loc))


class SimpleRValue(RValue):

    def __init__(self, value, where=None):
        assert isinstance(value, Number), describe_value(value)
        self.value = value
        self.where = where

    def eval(self, context):
        return self.value

    def __repr__(self):
        return 'SimpleRValue(%r)' % self.value

    def __str__(self):
        return repr(self.value)

    @staticmethod
    def parse_int(s, loc, tokens):
        return SimpleRValue(int(tokens[0]), where=Where(s, loc))

    @staticmethod
    def parse_float(s, loc, tokens):
        return SimpleRValue(float(tokens[0]), where=Where(s, loc))


class Binary(RValue):
    operations = {
        '+': lambda a, b: a + b,
        '-': lambda a, b: a - b,
        '*': lambda a, b: a * b,
    }

    def __init__(self, glyph, exprs, where=None):
        assert glyph in Binary.operations
        assert len(exprs) >= 2
        self.glyph = glyph
        self.exprs = exprs
        self.where = where

    def eval(self, context):
        values = [expr.eval(context) for expr in self.exprs]
        result = values[0]
        op = Binary.operations[self.glyph]
        for v in values[1:]:
            result = op(result, v)
        return result

    def __repr__(self):
        return 'Binary(%r,%r)' % (self.glyph, self.exprs)

    def __str__(self):
        return self.glyph.join(str(e) for e in self.exprs)

    @staticmethod
    def parse_action(s, loc, tokens):
        tokens = tokens[0]
        glyph = tokens[1]
        exprs = list(tokens[::2])
        return Binary(glyph, exprs, where=Where(s, loc))
