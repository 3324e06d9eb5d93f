"""
Forward-mode jets

Exact derivatives to order 3 in up to three variables, plus the left-invariant
frame operators acting on them.
"""
from .jet import Jet, jexp, jlog, jsqrt, jsin, jcos, jabs, jpow, value_of
from .horizontal import (
    ScalarField,
    HorizontalJet,
    as_points,
    coordinate_jets,
    field_jet,
    frame_derivative,
    horizontal_gradient,
    horizontal_jet,
)

__all__ = [
    'Jet',
    'jexp',
    'jlog',
    'jsqrt',
    'jsin',
    'jcos',
    'jabs',
    'jpow',
    'value_of',
    'ScalarField',
    'HorizontalJet',
    'as_points',
    'coordinate_jets',
    'field_jet',
    'frame_derivative',
    'horizontal_gradient',
    'horizontal_jet',
]
