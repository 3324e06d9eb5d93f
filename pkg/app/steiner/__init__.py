"""
Tube volumes

The g-derivation algebra on A..E, the pointwise coefficients of an eikonal
function and the raw and simplified tube-volume series.
"""
from .gpoly import (
    GPolynomial,
    G_TABLE,
    GAUSS_CURVATURE,
    g_apply,
    divergence_step,
    iterated_divergence,
    raw_coefficient,
    simplified_coefficient,
    gauss_bonnet_residual,
    algebra_check,
)
from .coefficients import (
    SteinerCoefficients,
    GIdentityReport,
    coefficients_at,
    coefficients_from_jet,
    g_identity_check,
)
from .series import SeriesTerm, SteinerReport, coefficient_integral, simplified_series

__all__ = [
    'GPolynomial',
    'G_TABLE',
    'GAUSS_CURVATURE',
    'g_apply',
    'divergence_step',
    'iterated_divergence',
    'raw_coefficient',
    'simplified_coefficient',
    'gauss_bonnet_residual',
    'algebra_check',
    'SteinerCoefficients',
    'GIdentityReport',
    'coefficients_at',
    'coefficients_from_jet',
    'g_identity_check',
    'SeriesTerm',
    'SteinerReport',
    'coefficient_integral',
    'simplified_series',
]
