"""
Expression parser wrapper using lark.

Parses the expression grammar (documented in docs/GRAMMAR.md) to the AST in
types.py and checks identifiers and component counts against the arity.
"""
from typing import Iterable, List, Optional, Tuple
import logging

from lark import Lark, Token, Transformer, v_args
from lark.exceptions import UnexpectedCharacters, UnexpectedEOF, UnexpectedInput, UnexpectedToken, VisitError

from app.errors import ArityError, ParseError, UnknownIdentifierError
from .types import (
    ARITY_COMPONENTS,
    ARITY_VARIABLES,
    BUILTIN_CONSTANTS,
    FUNCTIONS,
    Arity,
    Binary,
    Call,
    ExprProgram,
    Name,
    Node,
    Number,
    Unary,
)

logger = logging.getLogger(__name__)

# expr   := term (('+'|'-') term)*
# term   := factor (('*'|'/') factor)*
# factor := atom ('^' factor)?
# atom   := number | ident | call | '(' expr ')' | '-' atom
GRAMMAR = r"""
    start: expr ("," expr)*

    ?expr: term
         | expr "+" term          -> add
         | expr "-" term          -> sub

    ?term: factor
         | term "*" factor        -> mul
         | term "/" factor        -> div

    ?factor: atom
           | atom "^" factor      -> pow

    ?atom: NUMBER                 -> number
         | NAME                   -> name
         | NAME "(" arguments ")" -> call
         | "(" expr ")"
         | "-" atom               -> neg

    arguments: expr ("," expr)*

    NAME: /[A-Za-z_][A-Za-z_0-9]*/
    NUMBER: /(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?/

    %ignore /[ \t\r\n]+/
"""

# Readable names for the expected-token set
TOKEN_NAMES = {
    "NUMBER": "number",
    "NAME": "identifier",
    "LPAR": "'('",
    "RPAR": "')'",
    "MINUS": "'-'",
    "PLUS": "'+'",
    "STAR": "'*'",
    "SLASH": "'/'",
    "CIRCUMFLEX": "'^'",
    "COMMA": "','",
    "$END": "end of input",
}

_lark = Lark(GRAMMAR, parser="lalr", propagate_positions=True, maybe_placeholders=False)


def _byte_offset(text: str, pos: int) -> int:
    return len(text[:pos].encode("utf-8"))


class _AstBuilder(Transformer):
    """Turns the lark tree into AST nodes with byte spans"""

    def __init__(self, text: str):
        super().__init__()
        self.text = text

    def _span(self, meta) -> Tuple[int, int]:
        start = getattr(meta, "start_pos", 0) or 0
        end = getattr(meta, "end_pos", start) or start
        return _byte_offset(self.text, start), _byte_offset(self.text, end)

    def _token_span(self, tok: Token) -> Tuple[int, int]:
        return _byte_offset(self.text, tok.start_pos), _byte_offset(self.text, tok.end_pos)

    def start(self, children) -> List[Node]:
        return list(children)

    def arguments(self, children) -> List[Node]:
        return list(children)

    def number(self, children) -> Node:
        tok = children[0]
        return Number(float(tok), self._token_span(tok))

    def name(self, children) -> Node:
        tok = children[0]
        return Name(str(tok), self._token_span(tok))

    @v_args(meta=True)
    def call(self, meta, children) -> Node:
        tok, args = children
        return Call(str(tok), tuple(args), self._span(meta))

    @v_args(meta=True)
    def neg(self, meta, children) -> Node:
        return Unary("-", children[0], self._span(meta))

    def _binary(self, op: str, meta, children) -> Node:
        left, right = children
        return Binary(op, left, right, self._span(meta))

    @v_args(meta=True)
    def add(self, meta, children):
        return self._binary("+", meta, children)

    @v_args(meta=True)
    def sub(self, meta, children):
        return self._binary("-", meta, children)

    @v_args(meta=True)
    def mul(self, meta, children):
        return self._binary("*", meta, children)

    @v_args(meta=True)
    def div(self, meta, children):
        return self._binary("/", meta, children)

    @v_args(meta=True)
    def pow(self, meta, children):
        return self._binary("^", meta, children)


class ExprParser:
    """
    Parser for the expression language.

    Uses lark (LALR) and returns an ExprProgram whose identifiers are checked
    against the variables of the arity, the bound constants and the built-ins.
    """

    @staticmethod
    def parse(text: str, arity: Arity = Arity.FIELD, constants: Optional[Iterable[str]] = None) -> ExprProgram:
        """
        Parse expression text.

        Args:
            text: Comma-separated component expressions
            arity: field, curve, planar or patch
            constants: Names of constants bound at compile time

        Returns:
            ExprProgram with one AST per component

        Raises:
            ParseError: Syntax error, with byte offset and expected-token set
            UnknownIdentifierError: Name not declared for the arity
            ArityError: Wrong component count or function argument count
        """
        arity = Arity(arity)
        constants = tuple(sorted(set(constants or ())))
        components = ExprParser._parse_components(text)

        expected = ARITY_COMPONENTS[arity]
        if len(components) != expected:
            raise ArityError(
                f"{arity.value} expressions need {expected} component(s), got {len(components)}",
                arity=arity.value,
                expected=expected,
                found=len(components),
            )

        allowed = set(ARITY_VARIABLES[arity]) | set(constants) | set(BUILTIN_CONSTANTS)
        for component in components:
            ExprParser._check(component, allowed)

        program = ExprProgram(tuple(components), arity, constants, text)
        logger.debug(f"Parsed {arity.value} expression of depth {program.depth()}: {text!r}")
        return program

    @staticmethod
    def _parse_components(text: str) -> List[Node]:
        try:
            tree = _lark.parse(text)
            return _AstBuilder(text).transform(tree)
        except UnexpectedToken as e:
            if e.token.type == "$END":
                offset = _byte_offset(text, len(text))
            else:
                offset = _byte_offset(text, e.token.start_pos)
            raise ParseError(
                f"unexpected {e.token.type if e.token.type != '$END' else 'end of input'} {str(e.token)!r}",
                offset,
                [TOKEN_NAMES.get(t, t) for t in e.expected],
            )
        except UnexpectedCharacters as e:
            offset = _byte_offset(text, e.pos_in_stream)
            raise ParseError(
                f"unexpected character {text[e.pos_in_stream]!r}",
                offset,
                [TOKEN_NAMES.get(t, t) for t in (e.allowed or [])],
            )
        except UnexpectedEOF as e:
            raise ParseError("unexpected end of input", _byte_offset(text, len(text)),
                             [TOKEN_NAMES.get(t, t) for t in e.expected])
        except UnexpectedInput as e:
            raise ParseError(str(e), _byte_offset(text, getattr(e, "pos_in_stream", 0) or 0))
        except VisitError as e:
            raise ParseError(f"malformed expression: {e.orig_exc}", 0)

    @staticmethod
    def _check(node: Node, allowed: set):
        if isinstance(node, Name):
            if node.id not in allowed:
                raise UnknownIdentifierError(node.id, node.span)
        elif isinstance(node, Unary):
            ExprParser._check(node.operand, allowed)
        elif isinstance(node, Binary):
            ExprParser._check(node.left, allowed)
            ExprParser._check(node.right, allowed)
        elif isinstance(node, Call):
            nargs = FUNCTIONS.get(node.func)
            if nargs is None:
                raise UnknownIdentifierError(node.func, node.span)
            if nargs != len(node.args):
                raise ArityError(
                    f"{node.func} takes {nargs} argument(s), got {len(node.args)}",
                    function=node.func,
                    expected=nargs,
                    found=len(node.args),
                    span=list(node.span),
                )
            for a in node.args:
                ExprParser._check(a, allowed)


def parse(text: str, arity: Arity = Arity.FIELD, constants: Optional[Iterable[str]] = None) -> ExprProgram:
    return ExprParser.parse(text, arity, constants)
