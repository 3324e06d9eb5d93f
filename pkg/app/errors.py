"""
Exception hierarchy for heisgeom.

Every error carries its structured fields so the CLI and the HTTP layer can
emit machine-readable error objects without parsing messages.
"""
from typing import Any, Dict, List, Optional, Sequence, Tuple


class HeisgeomError(Exception):
    """Base class for all engine errors"""
    kind = "error"

    def __init__(self, message: str, **fields: Any):
        self.message = message
        self.fields = fields
        super().__init__(message)

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {"kind": self.kind, "message": self.message}
        data.update(self.fields)
        return data


# ---------------------------------------------------------------------------
# Input errors (exit code 1)
# ---------------------------------------------------------------------------

class InputError(HeisgeomError):
    kind = "input_error"


class ParseError(InputError):
    """Exception raised when expression parsing fails"""
    kind = "parse_error"

    def __init__(self, message: str, offset: int = 0, expected: Optional[Sequence[str]] = None):
        self.offset = offset
        self.expected = sorted(expected or [])
        super().__init__(
            f"Parse error at offset {offset}: {message}",
            offset=offset,
            expected=self.expected,
        )


class UnknownIdentifierError(InputError):
    kind = "unknown_identifier"

    def __init__(self, name: str, span: Tuple[int, int]):
        self.name = name
        self.span = span
        super().__init__(f"Unknown identifier '{name}' at offset {span[0]}", name=name, span=list(span))


class ArityError(InputError):
    kind = "arity_error"


class SceneError(InputError):
    kind = "scene_error"


class UnknownEntryError(InputError):
    kind = "unknown_entry"

    def __init__(self, name: str, available: List[str]):
        super().__init__(f"Unknown gallery entry '{name}'", name=name, available=available)


# ---------------------------------------------------------------------------
# Jet domain errors
# ---------------------------------------------------------------------------

class JetDomainError(HeisgeomError):
    """A jet primitive was evaluated outside its differentiable domain"""
    kind = "domain_error"

    def __init__(self, primitive: str, message: str, count: int = 1):
        self.primitive = primitive
        self.reason = message
        super().__init__(f"{primitive}: {message}", primitive=primitive, count=count)


class ExpressionDomainError(JetDomainError):
    """JetDomainError located in expression source"""

    def __init__(self, primitive: str, message: str, span: Tuple[int, int], count: int = 1):
        super().__init__(primitive, f"{message} (source span {span[0]}..{span[1]})", count)
        self.span = span
        self.fields["span"] = list(span)


# ---------------------------------------------------------------------------
# Geometry errors
# ---------------------------------------------------------------------------

class GeometryError(HeisgeomError):
    kind = "geometry_error"


class CharacteristicPointError(GeometryError):
    kind = "characteristic_point"


class ZeroVelocityError(GeometryError):
    kind = "zero_velocity"


class OffSurfaceError(GeometryError):
    kind = "off_surface"


class AmbiguousClassificationError(GeometryError):
    kind = "ambiguous_classification"


class UndeclaredCharacteristicError(GeometryError):
    kind = "undeclared_characteristic"


# ---------------------------------------------------------------------------
# Numerical errors
# ---------------------------------------------------------------------------

class NumericalError(HeisgeomError):
    kind = "numerical_error"


class QuadratureError(NumericalError):
    kind = "quadrature_error"


class StepSizeUnderflowError(NumericalError):
    kind = "step_size_underflow"


class ExtrapolationError(NumericalError):
    kind = "extrapolation_error"


class FlowDomainError(NumericalError):
    kind = "flow_domain_error"


class CheckFailure(HeisgeomError):
    """A verification ran to completion but did not pass"""
    kind = "check_failure"
