"""
Type definitions for the expression language
"""
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Tuple, Union


class Arity(str, Enum):
    """What an expression describes, which fixes its variables and component count"""
    FIELD = "field"
    CURVE = "curve"
    PLANAR = "planar"
    PATCH = "patch"


ARITY_VARIABLES: Dict[Arity, Tuple[str, ...]] = {
    Arity.FIELD: ("x1", "x2", "x3"),
    Arity.CURVE: ("t",),
    Arity.PLANAR: ("t",),
    Arity.PATCH: ("v", "w"),
}

ARITY_COMPONENTS: Dict[Arity, int] = {
    Arity.FIELD: 1,
    Arity.CURVE: 3,
    Arity.PLANAR: 2,
    Arity.PATCH: 3,
}

# Built-in functions and their argument counts
FUNCTIONS: Dict[str, int] = {
    "sin": 1,
    "cos": 1,
    "exp": 1,
    "ln": 1,
    "sqrt": 1,
    "abs": 1,
    "pow": 2,
}

BUILTIN_CONSTANTS: Dict[str, float] = {
    "pi": 3.141592653589793,
    "e": 2.718281828459045,
}

Span = Tuple[int, int]


@dataclass(frozen=True)
class Number:
    """
    Numeric literal.

    Attributes:
        value: Literal value (never negative; '-' is a Unary node)
        span: Byte range in the source, ignored by equality
    """
    value: float
    span: Span = field(default=(0, 0), compare=False)
    type: str = field(default="Number", init=False, repr=False, compare=False)

    def depth(self) -> int:
        return 0


@dataclass(frozen=True)
class Name:
    """Variable or named constant"""
    id: str
    span: Span = field(default=(0, 0), compare=False)
    type: str = field(default="Name", init=False, repr=False, compare=False)

    def depth(self) -> int:
        return 0


@dataclass(frozen=True)
class Unary:
    op: str
    operand: "Node"
    span: Span = field(default=(0, 0), compare=False)
    type: str = field(default="Unary", init=False, repr=False, compare=False)

    def depth(self) -> int:
        return 1 + self.operand.depth()


@dataclass(frozen=True)
class Binary:
    """
    Binary operation.

    Attributes:
        op: One of '+', '-', '*', '/', '^'
        left: Left operand
        right: Right operand
        span: Byte range in the source
    """
    op: str
    left: "Node"
    right: "Node"
    span: Span = field(default=(0, 0), compare=False)
    type: str = field(default="Binary", init=False, repr=False, compare=False)

    def depth(self) -> int:
        return 1 + max(self.left.depth(), self.right.depth())


@dataclass(frozen=True)
class Call:
    func: str
    args: Tuple["Node", ...]
    span: Span = field(default=(0, 0), compare=False)
    type: str = field(default="Call", init=False, repr=False, compare=False)

    def depth(self) -> int:
        return 1 + max(a.depth() for a in self.args)


Node = Union[Number, Name, Unary, Binary, Call]


@dataclass(frozen=True)
class ExprProgram:
    """
    A parsed expression: one AST per component.

    Attributes:
        components: Component trees (1 for fields, 2 for planar curves, 3 otherwise)
        arity: Expression arity
        constants: Names of bound constants the expression may reference
        source: Original text, ignored by equality
    """
    components: Tuple[Node, ...]
    arity: Arity
    constants: Tuple[str, ...] = ()
    source: str = field(default="", compare=False)

    def depth(self) -> int:
        return max(c.depth() for c in self.components)

    def names(self) -> List[str]:
        found: List[str] = []

        def walk(node: Node):
            if isinstance(node, Name):
                if node.id not in found:
                    found.append(node.id)
            elif isinstance(node, Unary):
                walk(node.operand)
            elif isinstance(node, Binary):
                walk(node.left)
                walk(node.right)
            elif isinstance(node, Call):
                for a in node.args:
                    walk(a)

        for c in self.components:
            walk(c)
        return found
