from pyparsing import ParseException

from ..interface import (Contract, ContractNotRespected, Where, describe_type,
                         single_token)


class Extension(Contract):
    """ A domain type registered with :py:func:`ensync.new_contract`.

        ``belief[P]`` checks the type and matches the tuple returned by the
        registered shape function against the bracketed dimensions.
    """
    registrar = {}

    def __init__(self, identifier, shape_contract=None, where=None):
        assert identifier in Extension.registrar, identifier
        assert shape_contract is None or isinstance(shape_contract, Contract), shape_contract
        Contract.__init__(self, where)
        self.identifier = identifier
        self.shape_contract = shape_contract

    def check_contract(self, context, value, silent):
        klass, shape_fn = Extension.registrar[self.identifier]
        if not isinstance(value, klass):
            error = ('Expected %s (%s), got %s.' %
                     (self.identifier, klass.__name__, describe_type(value)))
            raise ContractNotRespected(self, error, value, context)
        if self.shape_contract is not None:
            if shape_fn is None:
                error = '%s has no dimensions to check.' % self.identifier
                raise ContractNotRespected(self, error, value, context)
            self.shape_contract._check_contract(context, tuple(shape_fn(value)), silent)

    def __str__(self):
        if self.shape_contract is None:
            return self.identifier
        return '%s[%s]' % (self.identifier, self.shape_contract)

    def __repr__(self):
        return 'Extension(%r,%r)' % (self.identifier, self.shape_contract)

    @staticmethod
    def parse_action(s, loc, tokens):
        identifier = tokens[0]
        if identifier not in Extension.registrar:
            raise ParseException(s, loc, 'Unknown extension contract %r' % identifier)
        shape_contract = single_token(tokens, 'shape_contract')
        return Extension(identifier, shape_contract, where=Where(s, loc))
