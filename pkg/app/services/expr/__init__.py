"""
Expression language for fields, curves and patches.

Parses infix text with lark, pretty-prints ASTs back to text and compiles them
to jet closures.

Usage:
    from app.services.expr import compile_expression, Arity

    u = compile_expression("x3 - x1*x2/2", Arity.FIELD)
    jet = u.evaluate_jet([[1.0, 2.0, 0.5]], order=2)
"""
from .types import Arity, ExprProgram, Number, Name, Unary, Binary, Call, FUNCTIONS, BUILTIN_CONSTANTS
from .parser import ExprParser, parse
from .printer import to_text, program_to_text
from .compiler import (
    ExpressionCompiler,
    CompiledScalarField,
    CompiledCurve,
    CompiledPatch,
    compile_program,
    compile_expression,
    field_from_text,
    curve_from_text,
    patch_from_text,
)

__all__ = [
    'Arity',
    'ExprProgram',
    'Number',
    'Name',
    'Unary',
    'Binary',
    'Call',
    'FUNCTIONS',
    'BUILTIN_CONSTANTS',
    'ExprParser',
    'parse',
    'to_text',
    'program_to_text',
    'ExpressionCompiler',
    'CompiledScalarField',
    'CompiledCurve',
    'CompiledPatch',
    'compile_program',
    'compile_expression',
    'field_from_text',
    'curve_from_text',
    'patch_from_text',
]

__version__ = '1.0.0'
