from .types_misc import CheckType
from .comparison import CheckOrder
from .compositions import And, Or
from .variables import BindVariable, VariableRef, EqualTo, SimpleRValue, Binary
from .seq import Seq
from .array import Array, ShapeContract, Finite, ArrayCompare
from .extensions import Extension
