"""Numerical toolkit for mean-value inequalities of quasinearly subharmonic fields."""

from .backend import backend_name
from .geometry import Ball, Similarity, apply_similarity, lens_area, lens_constant, unit_ball_volume
from .regions import MarkedSet, Polygon, RadialProfile, Rect, Region, similarity_image_measure, truncation_radius
from .fields import Field, constant_field, evaluate, harmonic_field, indicator_field, radial_bump_field, sum_field
from .quadrature import MeanResult, QuadratureSpec, derive_seed, mean_over_ball, mean_over_image
from .qns_engine import (
    BallProbeGrid,
    ScaleFunction,
    SimilarityProbeGrid,
    ball_constant_from_image_constant,
    check_K,
    estimate_K,
    f_admissibility,
    generalized_test,
    image_constant_from_ball_constant,
    indicator_density,
    phi_functional,
)
from .radius_sets import (
    BlocksFamily,
    FullRayFamily,
    GapComplementFamily,
    GeometricFamily,
    RadiusSet,
    SuperGeometricFamily,
    classify,
    gap_constant,
    log_eps_net,
    porosity,
    rescale,
)

__version__ = "0.1.0"

__all__ = [
    "Ball",
    "BallProbeGrid",
    "BlocksFamily",
    "Field",
    "FullRayFamily",
    "GapComplementFamily",
    "GeometricFamily",
    "MarkedSet",
    "MeanResult",
    "Polygon",
    "QuadratureSpec",
    "RadialProfile",
    "RadiusSet",
    "Rect",
    "Region",
    "ScaleFunction",
    "Similarity",
    "SimilarityProbeGrid",
    "SuperGeometricFamily",
    "apply_similarity",
    "backend_name",
    "ball_constant_from_image_constant",
    "check_K",
    "classify",
    "constant_field",
    "derive_seed",
    "estimate_K",
    "evaluate",
    "f_admissibility",
    "gap_constant",
    "generalized_test",
    "harmonic_field",
    "image_constant_from_ball_constant",
    "indicator_density",
    "indicator_field",
    "lens_area",
    "lens_constant",
    "log_eps_net",
    "mean_over_ball",
    "mean_over_image",
    "phi_functional",
    "porosity",
    "radial_bump_field",
    "rescale",
    "similarity_image_measure",
    "sum_field",
    "truncation_radius",
    "unit_ball_volume",
    "__version__",
]
