"""
Gauss–Bonnet runs

Scene files, characteristic-set detection, boundary terms with their
orientation rule, the ε-excised defect and the finite-L scaled sum.
"""
from .scene import (
    ChartSpec,
    BoundarySpec,
    SceneSurface,
    Chart,
    Boundary,
    CompiledScene,
    compile_scene,
    parse_scene,
    load_scene,
    scene_scale,
)
from .characteristic import (
    CandidateKind,
    CharacteristicCandidate,
    CharacteristicSummary,
    characteristic_scan,
    scan_scene,
    tangential_rank_ratio,
)
from .defect import (
    EpsilonStep,
    GaussBonnetReport,
    ScaledGaussBonnet,
    boundary_term,
    characteristic_crossings,
    infer_orientation,
    resolve_orientation,
    hole_boundaries,
    orientation_self_check,
    surface_integral,
    gauss_bonnet_defect,
    scaled_gauss_bonnet,
    scaled_gauss_bonnet_sweep,
)

__all__ = [
    'ChartSpec',
    'BoundarySpec',
    'SceneSurface',
    'Chart',
    'Boundary',
    'CompiledScene',
    'compile_scene',
    'parse_scene',
    'load_scene',
    'scene_scale',
    'CandidateKind',
    'CharacteristicCandidate',
    'CharacteristicSummary',
    'characteristic_scan',
    'scan_scene',
    'tangential_rank_ratio',
    'EpsilonStep',
    'GaussBonnetReport',
    'ScaledGaussBonnet',
    'boundary_term',
    'characteristic_crossings',
    'infer_orientation',
    'resolve_orientation',
    'hole_boundaries',
    'orientation_self_check',
    'surface_integral',
    'gauss_bonnet_defect',
    'scaled_gauss_bonnet',
    'scaled_gauss_bonnet_sweep',
]
