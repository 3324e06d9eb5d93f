"""
Pretty-printer for expression ASTs.

Output re-parses to an identical AST: parentheses are emitted exactly where
precedence or associativity would otherwise regroup the tree.
"""
from .types import Binary, Call, ExprProgram, Name, Node, Number, Unary

# Binding strength: unary minus > pow > mul/div > add/sub
PRECEDENCE = {"+": 1, "-": 1, "*": 2, "/": 2, "^": 3}
ATOM = 4


def _precedence(node: Node) -> int:
    if isinstance(node, Binary):
        return PRECEDENCE[node.op]
    return ATOM


def _number(value: float) -> str:
    if value.is_integer() and abs(value) < 1e15:
        return str(int(value))
    return repr(value)


def to_text(node: Node) -> str:
    if isinstance(node, Number):
        return _number(node.value)
    if isinstance(node, Name):
        return node.id
    if isinstance(node, Call):
        return f"{node.func}({', '.join(to_text(a) for a in node.args)})"
    if isinstance(node, Unary):
        inner = to_text(node.operand)
        if _precedence(node.operand) < ATOM:
            inner = f"({inner})"
        return f"-{inner}"

    prec = PRECEDENCE[node.op]
    left, right = to_text(node.left), to_text(node.right)
    if node.op == "^":
        # right-associative, base must be an atom
        if _precedence(node.left) < ATOM:
            left = f"({left})"
        if _precedence(node.right) < prec:
            right = f"({right})"
        return f"{left}^{right}"
    # left-associative
    if _precedence(node.left) < prec:
        left = f"({left})"
    if _precedence(node.right) <= prec:
        right = f"({right})"
    return f"{left} {node.op} {right}"


def program_to_text(program: ExprProgram) -> str:
    return ", ".join(to_text(c) for c in program.components)
