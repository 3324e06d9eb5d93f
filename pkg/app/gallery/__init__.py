"""
Gallery of worked examples

Closed-form curvatures, the surfaces where Gauss–Bonnet fails and the
total-curvature check for closed horizontal curves.
"""
from .checks import CheckResult, EntryReport
from .fenchel import FenchelReport, fenchel_check, total_curvature
from .entries import (
    GalleryEntry,
    REGISTRY,
    exp_glued_field,
    exp_glued_segments,
    list_entries,
    run_entry,
    run_all,
)

__all__ = [
    'CheckResult',
    'EntryReport',
    'FenchelReport',
    'fenchel_check',
    'total_curvature',
    'GalleryEntry',
    'REGISTRY',
    'exp_glued_field',
    'exp_glued_segments',
    'list_entries',
    'run_entry',
    'run_all',
]
