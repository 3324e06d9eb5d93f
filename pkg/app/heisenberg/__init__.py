"""
Heisenberg group core

Group law, dilations, the left-invariant frame, the contact form, curve
models and horizontal lifts in exponential coordinates.
"""
from .types import HPoint, FrameVector, HorizontalVector
from .group import (
    mul_coords,
    group_mul,
    group_mul_array,
    group_inverse,
    dilate,
    dilate_array,
    rotation_matrix,
    left_translation_matrix,
    dilation_matrix,
    contact_form,
)
from .frame import (
    frame_matrix,
    frame_from_euclidean,
    frame_from_euclidean_array,
    euclidean_from_frame,
    euclidean_from_frame_array,
    J_rotate,
    J_rotate_array,
    horizontal_inner,
)
from .curves import CurveModel, JetCurve, ReversedCurve, TransformedCurve, require_regular
from .lift import LiftedCurve, horizontal_lift

__all__ = [
    'HPoint',
    'FrameVector',
    'HorizontalVector',
    'mul_coords',
    'group_mul',
    'group_mul_array',
    'group_inverse',
    'dilate',
    'dilate_array',
    'rotation_matrix',
    'left_translation_matrix',
    'dilation_matrix',
    'contact_form',
    'frame_matrix',
    'frame_from_euclidean',
    'frame_from_euclidean_array',
    'euclidean_from_frame',
    'euclidean_from_frame_array',
    'J_rotate',
    'J_rotate_array',
    'horizontal_inner',
    'CurveModel',
    'JetCurve',
    'ReversedCurve',
    'TransformedCurve',
    'require_regular',
    'LiftedCurve',
    'horizontal_lift',
]
