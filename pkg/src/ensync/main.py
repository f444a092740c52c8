import inspect

from .enabling import all_disabled
from .interface import (Contract, ContractDefinitionError, ContractException,
                        ContractNotRespected, ContractSyntaxError, Where,
                        describe_value)


class Storage:
    # Cache storage
    string2contract = {}


def check_contracts(contracts, values, context_variables=None):
    """
        Checks that the values respect the contracts, in one shared context.
        Not a public function -- no friendly messages.

        :return: the context (bound variables)
        :raise: ContractSyntaxError
        :raise: ContractNotRespected
    """
    assert isinstance(contracts, list)
    assert len(contracts) == len(values)

    context = dict(context_variables or {})
    for var in context:
        if not (isinstance(var, str) and len(var) == 1 and var.isupper()):
            msg = ('Invalid name %r for a variable. '
                   'I expect a single upper-case letter.' % var)
            raise ValueError(msg)

    parsed = [parse_flexible_spec(x) for x in contracts]
    for c, v in zip(parsed, values):
        c._check_contract(context, v, silent=False)
    return context


def parse_contract_string(string):
    from .syntax import ParseException, ParseFatalException, contract_expression

    if not isinstance(string, str):
        msg = 'Expected a string, obtained %s' % type(string)
        raise ValueError(msg)

    if string in Storage.string2contract:
        return Storage.string2contract[string]
    try:
        c = contract_expression.parse_string(string, parse_all=True)[0]
    except ContractDefinitionError:
        raise
    except (ParseException, ParseFatalException) as e:
        where = Where(string, character=min(e.loc, len(string)))
        raise ContractSyntaxError('%s' % e, where=where) from None
    assert isinstance(c, Contract), 'Want Contract, not %r' % c
    Storage.string2contract[string] = c
    return c


def parse_flexible_spec(spec):
    """ spec can be either a Contract or a contract string. """
    if isinstance(spec, Contract):
        return spec
    elif isinstance(spec, str):
        return parse_contract_string(spec)
    else:
        msg = 'I want either a string or a Contract, not %s.' % describe_value(spec)
        raise ContractException(msg)


def contract_decorator(*arg, **kwargs):
    """
        Decorator for adding contracts to functions.

        Contracts are given as keyword arguments named after the
        parameters, plus ``returns`` for the result: ::

              @contract(prior='belief[P]', F='array[MxP]', returns='filterstep[MxP]')
              def update(prior, obs_pred_mean, obs_pred_cov, F, y):
                  ...

        Variables (single upper-case letters) are shared by all the
        arguments of one call and by the return value.
    """
    if arg:
        msg = ('I expect that contract() is called with '
               'only keyword arguments (passed: %r)' % (arg,))
        raise ContractException(msg)

    if all_disabled():
        def tmp_wrap(f):
            return f
    else:
        def tmp_wrap(f):
            try:
                return contracts_decorate(f, **kwargs)
            except ContractSyntaxError as e:
                msg = u"Cannot decorate function %s:\n%s" % (f.__name__, e.error)
                raise ContractSyntaxError(msg, e.where) from None
            except ContractDefinitionError as e:
                raise e.copy() from None

    return tmp_wrap


def contracts_decorate(function_, **kwargs):
    """ An explicit way to decorate a given function.
        The decorator :py:func:`contract` calls this function internally.
    """
    if isinstance(function_, (classmethod, staticmethod)):
        msg = ('Cannot decorate a %s; apply @contract to the function first.'
               % type(function_).__name__)
        raise ContractDefinitionError(msg)

    signature = inspect.signature(function_)
    all_args = list(signature.parameters)

    returns = kwargs.pop('returns', None)
    for kw in kwargs:
        if kw not in all_args:
            msg = 'Unknown parameter %r; I know %r.' % (kw, all_args)
            raise ContractException(msg)

    returns_parsed = None if returns is None else parse_flexible_spec(returns)
    accepts_parsed = dict((x, parse_flexible_spec(kwargs[x])) for x in kwargs)
    # Bind in signature order so that variables are defined left to right.
    order = [a for a in all_args if a in accepts_parsed]

    def contracts_checker(f, *args, **kw):
        if all_disabled():
            return f(*args, **kw)

        bound = signature.bind(*args, **kw)
        bound.apply_defaults()

        context = {}
        for name in order:
            try:
                accepts_parsed[name]._check_contract(context, bound.arguments[name],
                                                     silent=False)
            except ContractNotRespected as e:
                e.error = ('Breach for argument %r to %s().\n'
                           % (name, function_.__name__)) + e.error
                raise e

        result = f(*args, **kw)

        if returns_parsed is not None:
            try:
                returns_parsed._check_contract(context, result, silent=False)
            except ContractNotRespected as e:
                e.error = ('Breach for return value of %s().\n'
                           % function_.__name__) + e.error
                raise e
        return result

    from decorator import decorate

    wrapper = decorate(function_, contracts_checker)
    wrapper.__contracts__ = dict(returns=returns_parsed, **accepts_parsed)
    return wrapper


def check(contract, object, desc=None, **context):  # @ReservedAssignment
    """
        Checks that ``object`` satisfies the contract
        described by ``contract``.

        :param desc: An optional description of the error. If given,
                     it is included in the error message.
        :return: the variables bound while checking
    """
    if all_disabled():
        return {}

    if not isinstance(contract, str):
        raise ValueError('I expect a string (contract spec) as the first '
                         'argument, not a %s.' % describe_value(contract))
    try:
        return check_contracts([contract], [object], context)
    except ContractNotRespected as e:
        if desc is not None:
            e.error = '%s\n%s' % (desc, e.error)
        raise e


def check_multiple(couples, desc=None):
    """
        Checks multiple couples of (contract, value) in the same context.

        This means that the variables in each contract are shared with
        the others.
    """
    if all_disabled():
        return {}
    if not couples or not all(isinstance(c, tuple) and len(c) == 2 for c in couples):
        raise ValueError('I expect a non-empty list of (string, object) tuples.')
    contracts = [x[0] for x in couples]
    values = [x[1] for x in couples]
    try:
        return check_contracts(contracts, values)
    except ContractNotRespected as e:
        if desc is not None:
            e.error = '%s\n%s' % (desc, e.error)
        raise e


def new_contract(identifier, klass, shape=None):
    """
        Registers a domain type so that it can be named in contracts.

        ``shape`` is an optional callable returning a tuple of integers; it
        is what the bracketed dimensions are matched against. ::

            new_contract('belief', GaussianBelief, lambda b: (b.dim,))

            @contract(b='belief[P]', G='array[PxP]')
            def f(b, G): ...

        Registering the same identifier twice with the same class is
        allowed (module reloads); a different class is an error.
    """
    from .library import Extension

    if not isinstance(identifier, str):
        msg = 'I expect the identifier to be a string; received %s.' % describe_value(identifier)
        raise ValueError(msg)
    if not (identifier[:1].islower() and identifier.replace('_', '').isalnum()):
        msg = 'The identifier %r does not look like a lower-case name.' % identifier
        raise ValueError(msg)
    if not isinstance(klass, type):
        raise ValueError('I need a class for %r, got %s.' % (identifier, describe_value(klass)))
    if shape is not None and not callable(shape):
        raise ValueError('The shape of %r must be callable.' % identifier)

    try:
        c = parse_contract_string(identifier)
    except ContractSyntaxError:
        pass
    else:
        if not (identifier in Extension.registrar and
                Extension.registrar[identifier][0].__name__ == klass.__name__):
            msg = ('Invalid identifier %r; it overwrites an already known '
                   'expression. In fact, I can parse it as %s (%r).' %
                   (identifier, c, c))
            raise ValueError(msg)

    Extension.registrar[identifier] = (klass, shape)
    # Cached parses may refer to the previous registration.
    Storage.string2contract.clear()
    return Extension(identifier)
