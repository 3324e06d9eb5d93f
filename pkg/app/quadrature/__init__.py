"""
Measures and quadrature

Adaptive Gauss–Legendre cells, curve and perimeter measures, and ε → 0
extrapolation of excised integrals.
"""
from .engine import (
    Exclusion,
    QuadratureSpec,
    QuadratureResult,
    gauss_legendre,
    integrate_interval,
    integrate_rectangle,
    edge_predicate,
)
from .measures import (
    MeasureKind,
    length_density,
    length_integral,
    horizontal_matrix,
    perimeter_density_parametric,
    perimeter_density_implicit,
    perimeter_integral_parametric,
    perimeter_integral_implicit,
)
from .extrapolate import (
    ExtrapolationResult,
    richardson,
    richardson_pair,
    log_log_slope,
    excise_and_extrapolate,
)

__all__ = [
    'Exclusion',
    'QuadratureSpec',
    'QuadratureResult',
    'gauss_legendre',
    'integrate_interval',
    'integrate_rectangle',
    'edge_predicate',
    'MeasureKind',
    'length_density',
    'length_integral',
    'horizontal_matrix',
    'perimeter_density_parametric',
    'perimeter_density_implicit',
    'perimeter_integral_parametric',
    'perimeter_integral_implicit',
    'ExtrapolationResult',
    'richardson',
    'richardson_pair',
    'log_log_slope',
    'excise_and_extrapolate',
]
