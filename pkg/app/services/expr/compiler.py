"""
Expression compiler.

Turns a parsed ExprProgram into closures over an environment of jets, so the
same compiled expression yields values, gradients and Hessians at a batch of
points. Domain violations raised by the jet primitives are re-raised with the
source span of the offending node.
"""
from typing import Any, Callable, Dict, List, Mapping, Optional
import logging

import numpy as np

from app.errors import ExpressionDomainError, JetDomainError
from app.geometry.patches import JetPatch
from app.heisenberg.curves import JetCurve
from app.jets.horizontal import coordinate_jets
from app.jets.jet import Jet, jabs, jcos, jexp, jlog, jpow, jsin, jsqrt
from .parser import ExprParser
from .types import BUILTIN_CONSTANTS, Arity, ExprProgram, Node

logger = logging.getLogger(__name__)

Env = Dict[str, Any]
Compiled = Callable[[Env], Any]


def _pow(base, exponent):
    if isinstance(exponent, Jet):
        if isinstance(base, Jet):
            return base ** exponent
        return exponent.__rpow__(base)
    exponent = np.asarray(exponent, dtype=float)
    if exponent.ndim == 0:
        return jpow(base, float(exponent))
    # exponent varies over the batch but carries no derivatives
    if isinstance(base, Jet):
        return jexp(jlog(base) * exponent)
    base = np.asarray(base, dtype=float)
    bad = (base < 0.0) & (exponent != np.round(exponent))
    if np.any(bad):
        raise JetDomainError("pow", "non-integer exponent requires a positive base", int(np.count_nonzero(bad)))
    return np.power(base, exponent)


def _div(a, b):
    if isinstance(b, Jet):
        return a / b if isinstance(a, Jet) else b.__rtruediv__(a)
    b = np.asarray(b, dtype=float)
    if np.any(b == 0.0):
        raise JetDomainError("div", "division by zero", int(np.count_nonzero(b == 0.0)))
    return a / b


BINARY_OPERATIONS: Dict[str, Callable[[Any, Any], Any]] = {
    "+": lambda a, b: a + b,
    "-": lambda a, b: a - b,
    "*": lambda a, b: a * b,
    "/": _div,
    "^": _pow,
}

CALLS: Dict[str, Callable[..., Any]] = {
    "sin": jsin,
    "cos": jcos,
    "exp": jexp,
    "ln": jlog,
    "sqrt": jsqrt,
    "abs": jabs,
    "pow": _pow,
}


class ExpressionCompiler:
    """
    Compiles AST nodes to closures.

    Example:
        compiler = ExpressionCompiler({"a": 2.0})
        fn = compiler.compile(program.components[0])
        fn({"x1": x1, "x2": x2, "x3": x3})
    """

    def __init__(self, constants: Optional[Mapping[str, float]] = None):
        self.constants = {k: float(v) for k, v in (constants or {}).items()}

    def compile(self, node: Node) -> Compiled:
        handler = getattr(self, f"_compile_{node.type}", None)
        if handler is None:
            raise ValueError(f"Unknown expression node type: {node.type}")
        return handler(node)

    def _compile_Number(self, node) -> Compiled:
        value = node.value
        return lambda env: value

    def _compile_Name(self, node) -> Compiled:
        name = node.id
        if name in self.constants:
            value = self.constants[name]
            return lambda env: value
        if name in BUILTIN_CONSTANTS:
            value = BUILTIN_CONSTANTS[name]
            return lambda env: value
        return lambda env: env[name]

    def _compile_Unary(self, node) -> Compiled:
        operand = self.compile(node.operand)
        return lambda env: -operand(env)

    def _compile_Binary(self, node) -> Compiled:
        left, right = self.compile(node.left), self.compile(node.right)
        op = BINARY_OPERATIONS[node.op]
        span = node.span

        def run(env):
            a, b = left(env), right(env)
            try:
                return op(a, b)
            except ExpressionDomainError:
                raise
            except JetDomainError as e:
                raise ExpressionDomainError(e.primitive, e.reason, span, e.fields.get("count", 1))

        return run

    def _compile_Call(self, node) -> Compiled:
        args = [self.compile(a) for a in node.args]
        fn = CALLS[node.func]
        span = node.span

        def run(env):
            values = [a(env) for a in args]
            try:
                return fn(*values)
            except ExpressionDomainError:
                raise
            except JetDomainError as e:
                raise ExpressionDomainError(e.primitive, e.reason, span, e.fields.get("count", 1))

        return run


class CompiledExpression:
    """Base for compiled programs: keeps the program and the component closures"""

    def __init__(self, program: ExprProgram, constants: Optional[Mapping[str, float]] = None):
        self.program = program
        self.constants = dict(constants or {})
        compiler = ExpressionCompiler(self.constants)
        self.components: List[Compiled] = [compiler.compile(c) for c in program.components]

    @property
    def source(self) -> str:
        return self.program.source

    def _run(self, env: Env) -> List[Any]:
        return [c(env) for c in self.components]


class CompiledScalarField(CompiledExpression):
    """Scalar field u(x1, x2, x3); callable on coordinate jets"""

    def __call__(self, x1: Jet, x2: Jet, x3: Jet) -> Jet:
        value = self._run({"x1": x1, "x2": x2, "x3": x3})[0]
        if isinstance(value, Jet):
            return value
        return x1.like(value)

    def evaluate_jet(self, points, order: int = 2) -> Jet:
        return self(*coordinate_jets(points, order))

    def value(self, points) -> np.ndarray:
        return self.evaluate_jet(points, 0).value


class CompiledCurve(CompiledExpression, JetCurve):
    """Curve t ↦ (γ1, γ2, γ3), or planar t ↦ (γ1, γ2)"""

    def __init__(self, program: ExprProgram, constants: Optional[Mapping[str, float]] = None,
                 t0: Optional[float] = None, t1: Optional[float] = None):
        CompiledExpression.__init__(self, program, constants)
        JetCurve.__init__(self, lambda t: self._run({"t": t}), t0, t1,
                          dim=len(program.components), name=program.source)


class CompiledPatch(CompiledExpression, JetPatch):
    """Patch (v, w) ↦ f(v, w)"""

    def __init__(self, program: ExprProgram, constants: Optional[Mapping[str, float]] = None):
        CompiledExpression.__init__(self, program, constants)
        JetPatch.__init__(self, lambda v, w: self._run({"v": v, "w": w}), name=program.source)


def compile_program(program: ExprProgram, constants: Optional[Mapping[str, float]] = None, **kwargs):
    """
    Compile a parsed program to the model its arity describes.

    Args:
        program: Parsed expression
        constants: Values of the constants the program was parsed with
        **kwargs: t0/t1 for curves

    Returns:
        CompiledScalarField, CompiledCurve or CompiledPatch
    """
    constants = dict(constants or {})
    missing = [c for c in program.constants if c not in constants]
    if missing:
        raise ValueError(f"no value bound for constant(s) {', '.join(missing)}")
    if program.arity == Arity.FIELD:
        return CompiledScalarField(program, constants)
    if program.arity in (Arity.CURVE, Arity.PLANAR):
        return CompiledCurve(program, constants, kwargs.get("t0"), kwargs.get("t1"))
    return CompiledPatch(program, constants)


def compile_expression(text: str, arity: Arity = Arity.FIELD,
                       constants: Optional[Mapping[str, float]] = None, **kwargs):
    """Parse and compile in one step"""
    constants = dict(constants or {})
    program = ExprParser.parse(text, arity, constants.keys())
    logger.debug(f"Compiling {Arity(arity).value} expression {text!r}")
    return compile_program(program, constants, **kwargs)


def field_from_text(text: str, constants: Optional[Mapping[str, float]] = None) -> CompiledScalarField:
    return compile_expression(text, Arity.FIELD, constants)


def curve_from_text(text: str, t0: float, t1: float, planar: bool = False,
                    constants: Optional[Mapping[str, float]] = None) -> CompiledCurve:
    arity = Arity.PLANAR if planar else Arity.CURVE
    return compile_expression(text, arity, constants, t0=t0, t1=t1)


def patch_from_text(text: str, constants: Optional[Mapping[str, float]] = None) -> CompiledPatch:
    return compile_expression(text, Arity.PATCH, constants)

