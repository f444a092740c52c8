"""
    The contract grammar.

    Examples of accepted strings::

        array[MxP](finite)      seq[N](step[MxP])      belief[P]
        int,>=1,K               float|None             array[(2*K*K)]
"""
# All the imports from pyparsing go here
from pyparsing import (DelimitedList, Forward, Group, Keyword, OpAssoc, Optional,
                       ParseException, ParseFatalException, ParserElement,
                       Regex, Suppress, ZeroOrMore,
                       infix_notation, one_of)

# Enable memoization (much faster!)
ParserElement.enable_packrat(cache_size_limit=None)

from .library import (And, Array, ArrayCompare, Binary, BindVariable, CheckOrder,
                      CheckType, EqualTo, Extension, Finite, Or, Seq, ShapeContract,
                      SimpleRValue, VariableRef)

O = Optional
S = Suppress

__all__ = ['contract_expression', 'ParseException', 'ParseFatalException']


def _number_action(s, loc, tokens):
    if '.' in tokens[0] or 'e' in tokens[0].lower():
        return SimpleRValue.parse_float(s, loc, tokens)
    return SimpleRValue.parse_int(s, loc, tokens)


number = Regex(r'[+-]?(?:\d+\.\d*|\.\d+|\d+)(?:[eE][+-]?\d+)?')
number.set_parse_action(_number_action)
number.set_name('number')

# A single upper-case letter is a variable. It may be followed by the shape
# separator 'x' (as in 'MxP') but by no other identifier character.
variable = Regex(r'[A-Z](?![A-Za-wyz0-9_])')
variable.set_name('variable')

int_variables_ref = variable.copy().set_parse_action(VariableRef.parse_action)
int_variables_contract = variable.copy().set_parse_action(BindVariable.parse_action)

operand = number | int_variables_ref
operand.set_name('r-value')

rvalue = infix_notation(operand, [
    ('*', 2, OpAssoc.LEFT, Binary.parse_action),
    ('-', 2, OpAssoc.LEFT, Binary.parse_action),
    ('+', 2, OpAssoc.LEFT, Binary.parse_action),
])
rvalue.set_name('rvalue')

glyphs = one_of('>= <= != == > <')

contract_expression = Forward()
contract_expression.set_name('contract')

# Dimensions inside brackets: 'N' binds, '3' and '(K*K)' compare.
dim_expression = (S('(') + rvalue + S(')')).set_parse_action(EqualTo.parse_action)
dim_number = number.copy().add_parse_action(EqualTo.parse_action)
dimension = dim_expression | dim_number | int_variables_contract
dimension.set_name('dimension')

shape_contract = dimension + ZeroOrMore(S('x') + dimension)
shape_contract.set_parse_action(ShapeContract.parse_action)
shape_contract.set_name('shape contract')

optional_shape = O(S('[') + shape_contract('shape_contract') + S(']'))

finite = Keyword('finite').set_parse_action(Finite.parse_action)
element_compare = (glyphs + rvalue).set_parse_action(ArrayCompare.parse_action)
element_contract = finite | element_compare

array_contract = (S(Keyword('array')) + optional_shape +
                  O(S('(') + Group(DelimitedList(element_contract))('elements') + S(')')))
array_contract.set_parse_action(Array.parse_action)
array_contract.set_name('array contract')

seq_contract = (S(Keyword('seq')) + O(S('[') + dimension('length') + S(']')) +
                O(S('(') + contract_expression('elements') + S(')')))
seq_contract.set_parse_action(Seq.parse_action)
seq_contract.set_name('seq contract')

type_contract = (Keyword('int') | Keyword('float') | Keyword('str') |
                 Keyword('None'))
type_contract.set_parse_action(CheckType.parse_action)

comparison = (glyphs + rvalue).set_parse_action(CheckOrder.parse_action)

identifier = Regex(r'[a-z][a-z0-9_]*')
extension_contract = identifier + optional_shape
extension_contract.set_parse_action(Extension.parse_action)
extension_contract.set_name('registered type')

simple_contract = (array_contract | seq_contract | type_contract |
                   comparison | extension_contract | int_variables_contract)
simple_contract.set_name('simple contract expression')

contract_expression <<= infix_notation(simple_contract, [
    (',', 2, OpAssoc.LEFT, And.parse_action),
    ('|', 2, OpAssoc.LEFT, Or.parse_action),
])
