from ..interface import Contract, ContractNotRespected, Where


class And(Contract):

    def __init__(self, clauses, where=None):
        assert isinstance(clauses, list)
        assert len(clauses) >= 2
        Contract.__init__(self, where)
        self.clauses = clauses

    def check_contract(self, context, value, silent):
        for c in self.clauses:
            c._check_contract(context, value, silent)

    def __repr__(self):
        return 'And(%r)' % self.clauses

    def __str__(self):
        return ','.join(rep(c, (Or,)) for c in self.clauses)

    @staticmethod
    def parse_action(s, loc, tokens):
        clauses = list(tokens[0][::2])
        return And(clauses, where=Where(s, loc))


class Or(Contract):

    def __init__(self, clauses, where=None):
        assert isinstance(clauses, list)
        assert len(clauses) >= 2
        Contract.__init__(self, where)
        self.clauses = clauses

    def check_contract(self, context, value, silent):
        errors = []
        for c in self.clauses:
            # Variables bound by a failed alternative must not leak.
            attempt = context.copy()
            try:
                c._check_contract(attempt, value, silent)
            except ContractNotRespected as e:
                errors.append(e)
            else:
                context.update(attempt)
                return
        msg = 'Could not satisfy any of the %d clauses in %s.' % (len(self.clauses), self)
        for i, e in enumerate(errors):
            msg += '\n ---- Clause #%d:   %s' % (i, e.error)
        raise ContractNotRespected(self, msg, value, context)

    def __repr__(self):
        return 'Or(%r)' % self.clauses

    def __str__(self):
        return '|'.join(str(c) for c in self.clauses)

    @staticmethod
    def parse_action(s, loc, tokens):
        clauses = list(tokens[0][::2])
        return Or(clauses, where=Where(s, loc))


def rep(c, parenthesize):
    if isinstance(c, parenthesize):
        return '(%s)' % c
    return str(c)
