from abc import ABCMeta, abstractmethod

from pyparsing import ParseResults


class Where(object):
    """
        An object of this class represents a place in a contract string.

        All parsed elements contain a reference to a :py:class:`Where` object
        so that we can output pretty error messages.
    """

    def __init__(self, string, character):
        if not isinstance(string, str):
            msg = 'I expect the string to be a str, not %r' % string
            raise ValueError(msg)
        if not (0 <= character <= len(string)):
            msg = ('Invalid character loc %s for string of len %s.' %
                   (character, len(string)))
            raise ValueError(msg)
        self.string = string
        self.character = character

    def __repr__(self):
        return 'Where(%r, %d)' % (self.string, self.character)

    def __str__(self):
        return format_where(self)


def format_where(w, mark=None):
    """ One-line rendering of the string with an arrow under the location. """
    s = ' %s\n' % w.string
    s += ' ' + ' ' * w.character + '^'
    if mark is not None:
        s += ' ' + mark
    return s


def add_prefix(s, prefix):
    return '\n'.join(prefix + l for l in s.split('\n'))


class EnsyncException(Exception):
    """ The base class for the exceptions thrown by this package. """


class ContractException(EnsyncException):
    """ Base class for the errors of the argument-checking layer. """


class ContractDefinitionError(ContractException):
    """ Thrown when defining the contracts """

    def copy(self):
        """ Returns a copy of the exception so we can re-raise it by erasing the stack. """
        return type(self)(*self.args)


class ContractSyntaxError(ContractDefinitionError):
    """ Exception thrown when there is a syntax error in the contracts. """

    def __init__(self, error, where=None):
        self.error = error
        self.where = where
        ContractDefinitionError.__init__(self, error, where)

    def __str__(self):
        error, where = self.args
        s = error
        if where is not None:
            s += "\n\n" + add_prefix(str(where), ' ')
        return s


class ContractNotRespected(ContractException):
    """ Exception thrown when a value does not respect a contract. """

    def __init__(self, contract, error, value, context):
        Exception.__init__(self, contract, error, value, context)
        assert isinstance(contract, Contract), contract
        assert isinstance(context, dict), context
        assert isinstance(error, str), error

        self.contract = contract
        self.error = error
        self.value = value
        self.context = context
        self.stack = []

    def __str__(self):
        msg = str(self.error)
        rows = [['checking: %s' % contract,
                 'for value: %s' % describe_value(value, clip=70)]
                for (contract, _, value) in self.stack]
        if rows:
            msg += format_table(rows, colspacing=3)
        bound = dict((k, v) for k, v in self.context.items()
                     if isinstance(k, str) and len(k) == 1)
        if bound:
            varss = ['- %s: %s' % (k, describe_value(bound[k], clip=70))
                     for k in sorted(bound)]
            msg += '\nVariables bound in inner context:\n' + '\n'.join(varss)
        return msg


def format_table(rows, colspacing=1):
    sizes = [max(len(row[i]) for row in rows) for i in range(len(rows[0]))]
    s = ''
    for row in rows:
        s += '\n'
        for size, cell in zip(sizes, row):
            s += cell.ljust(size) + ' ' * colspacing
    return s


class NumericalError(EnsyncException):
    """ A computation could not proceed on the given numbers. """


class DegenerateCovariance(NumericalError):
    """ A covariance that must be inverted is singular or nearly so. """

    def __init__(self, msg, step=None):
        NumericalError.__init__(self, msg)
        self.step = step


class DegenerateInnovationCovariance(DegenerateCovariance):
    pass


class DegeneratePriorCovariance(DegenerateCovariance):
    pass


class NotPositiveDefinite(NumericalError):
    pass


class SimulationUnstable(NumericalError):
    """ The generator produced a nonpositive inter-onset interval. """

    def __init__(self, msg, step=None):
        NumericalError.__init__(self, msg)
        self.step = step


class ConfigError(EnsyncException):
    """ Invalid or unknown configuration value. """


class FormatError(EnsyncException):
    """ A file could not be parsed. """


class OracleSizeError(EnsyncException):
    """ The brute-force joint would be too large. """


class RValue(metaclass=ABCMeta):
    """ A value computed from the context (numbers, bound variables). """

    @abstractmethod
    def eval(self, context):
        """ Can raise ValueError; will be wrapped in ContractNotRespected. """

    def __eq__(self, other):
        return (self.__class__ == other.__class__ and
                self.__repr__() == other.__repr__())

    def __hash__(self):
        return hash(repr(self))

    @abstractmethod
    def __repr__(self):
        pass

    @abstractmethod
    def __str__(self):
        pass


def single_token(tokens, name):
    """ The named result of a parse, unwrapped from its ParseResults. """
    if name not in tokens:
        return None
    value = tokens[name]
    if isinstance(value, ParseResults):
        assert len(value) == 1, value
        value = value[0]
    return value


def eval_in_context(context, value, contract):
    assert isinstance(contract, Contract)
    assert isinstance(value, RValue), describe_value(value)
    try:
        return value.eval(context)
    except ValueError as e:
        msg = 'Error while evaluating RValue %r: %s' % (value, e)
        raise ContractNotRespected(contract, msg, value, context)


class Contract(metaclass=ABCMeta):

    def __init__(self, where):
        assert where is None or isinstance(where, Where), where
        self.where = where

    def check(self, value):
        """
            Checks that the value satisfies this contract.

            :raise: ContractNotRespected
        """
        context = {}
        self._check_contract(context, value, silent=False)
        return context

    @abstractmethod
    def check_contract(self, context, value, silent):
        """
            Checks that value is ok with this contract in the specific
            context. This is the function that subclasses must implement.
        """

    def _check_contract(self, context, value, silent):
        """ Recursively checks the contracts; it calls check_contract,
            but the error is wrapped recursively. This is the function
            that subclasses must call when checking their sub-contracts.
        """
        variables = context.copy()
        try:
            self.check_contract(context, value, silent)
        except ContractNotRespected as e:
            e.stack.append((self, variables, value))
            raise

    @abstractmethod
    def __repr__(self):
        """ A representation that can be evaluated with the names in
            :py:mod:`ensync.library` in scope. """

    @abstractmethod
    def __str__(self):
        """ A representation that parses back to an equal contract. """

    def __eq__(self, other):
        return (self.__class__ == other.__class__ and
                self.__repr__() == other.__repr__())

    def __hash__(self):
        return hash(repr(self))


def clipped_repr(x, clip):
    s = "{0!r}".format(x)
    if len(s) > clip:
        clip_tag = '... [clip]'
        cut = clip - len(clip_tag)
        s = "%s%s" % (s[:cut], clip_tag)
    return s


def remove_newlines(s):
    return s.replace('\n', ' ')


def describe_type(x):
    """ Returns a friendly description of the type of x. """
    return type(x).__name__


def describe_value(x, clip=80):
    """ Describes an object, for use in the error messages.
        Short description, no multiline.
    """
    if hasattr(x, 'shape') and hasattr(x, 'dtype'):
        shape_desc = 'x'.join(str(i) for i in x.shape)
        desc = 'array[%s](%s) ' % (shape_desc, x.dtype)
    else:
        desc = 'Instance of %s: ' % describe_type(x)
    final = desc + clipped_repr(x, max(clip - len(desc), 20))
    return remove_newlines(final)


def describe_value_multiline(x):
    """ Describes an object, for use in the error messages. """
    if hasattr(x, 'shape') and hasattr(x, 'dtype'):
        shape_desc = 'x'.join(str(i) for i in x.shape)
        return 'array[%s](%s)\n%r' % (shape_desc, x.dtype, x)
    if isinstance(x, str):
        return x if x else "''"
    return 'Instance of %s.\n%r' % (describe_type(x), x)
