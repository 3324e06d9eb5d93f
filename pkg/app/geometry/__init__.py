"""
Riemannian approximations and their sub-Riemannian limits

The metrics g_L, their connection and curvature, surfaces and curves at
finite L, the L → ∞ quantities k⁰, k^{0,s}, H₀, K₀, invariance checks and the
summability diagnostic (app.geometry.summability, imported on its own since it
builds on app.quadrature).
"""
from .patches import PatchModel, JetPatch, PatchEdgeCurve, PolarGraphChart
from .riemannian import (
    ApproximationParams,
    validate_L,
    metric_matrix,
    metric_inverse,
    christoffel,
    christoffel_from_metric,
    frame_bracket,
    frame_connection,
    koszul_frame,
    covariant_derivative,
    curvature_tensor,
    sectional_curvature,
    connection_from_christoffel,
    covariant_accel,
    curve_curvature_L,
    speed_L,
    planar_curvature,
)
from .surface import (
    SurfaceFrame,
    SecondFundamentalForm,
    characteristic_ratio,
    surface_frame,
    second_fundamental_form,
    mean_curvature_L,
    gauss_curvature_L,
    ambient_sectional_L,
    ambient_sectional_closed_form,
    signed_geodesic_curvature_L,
    geodesic_curvature_L,
)
from .geodesic import SampledCurve, geodesic_integrate, geodesic_residual, contact_drift
from .subriemannian import (
    PointClass,
    CurvatureReport,
    classify_curve_points,
    curve_curvature_0,
    signed_geodesic_curvature_0,
    gaussian_curvature_0,
    mean_curvature_0,
    classify_surface_points,
    k0_decomposition,
    defining_function_independence_check,
    legendrian_curvature,
)
from .invariance import (
    InvarianceReport,
    translate_curve,
    rotate_curve,
    dilate_curve,
    translate_field,
    rotate_field,
    dilate_field,
    isometry_invariance_suite,
)

__all__ = [
    'PatchModel',
    'JetPatch',
    'PatchEdgeCurve',
    'PolarGraphChart',
    'ApproximationParams',
    'validate_L',
    'metric_matrix',
    'metric_inverse',
    'christoffel',
    'christoffel_from_metric',
    'frame_bracket',
    'frame_connection',
    'koszul_frame',
    'covariant_derivative',
    'curvature_tensor',
    'sectional_curvature',
    'connection_from_christoffel',
    'covariant_accel',
    'curve_curvature_L',
    'speed_L',
    'planar_curvature',
    'SurfaceFrame',
    'SecondFundamentalForm',
    'characteristic_ratio',
    'surface_frame',
    'second_fundamental_form',
    'mean_curvature_L',
    'gauss_curvature_L',
    'ambient_sectional_L',
    'ambient_sectional_closed_form',
    'signed_geodesic_curvature_L',
    'geodesic_curvature_L',
    'SampledCurve',
    'geodesic_integrate',
    'geodesic_residual',
    'contact_drift',
    'PointClass',
    'CurvatureReport',
    'classify_curve_points',
    'curve_curvature_0',
    'signed_geodesic_curvature_0',
    'gaussian_curvature_0',
    'mean_curvature_0',
    'classify_surface_points',
    'k0_decomposition',
    'defining_function_independence_check',
    'legendrian_curvature',
    'InvarianceReport',
    'translate_curve',
    'rotate_curve',
    'dilate_curve',
    'translate_field',
    'rotate_field',
    'dilate_field',
    'isometry_invariance_suite',
]
