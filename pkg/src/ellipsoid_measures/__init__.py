"""Surface area, projections and integral mean curvatures of ellipsoids."""

from .core import (
    ConvergenceError,
    DomainError,
    Ellipsoid,
    EvaluationReport,
    MultiIndex,
    QuadratureError,
    elementary_symmetric,
    log_elementary_symmetric,
    multi_indices,
    unit_ball_volume,
    unit_sphere_area,
)
from .curvature import (
    BoundsResult,
    CurvatureQuery,
    curvature_bounds,
    haar_subspace_sample,
    kubota_mc,
    mk_ball,
    mk_flat_ball,
    mk_ratio,
)
from .lauricella import FdParams, fd_integral, fd_series, lauricella_fd, ratio_via_fd
from .projections import (
    Projector,
    SubspaceBasis,
    minor_det,
    principal_minor_sum,
    projected_volume,
    sum_sq_minors,
)
from .quadrature import QuadratureConfig
from .sphere import Estimate, MonteCarloConfig, lp_sphere_mean, sphere_mean_homogeneous
from .surface import (
    RatioResult,
    lp_symmetric_identity,
    ratio_asymptotic,
    ratio_bounds,
    ratio_norm,
    surface_area,
)

__version__ = "0.1.0"

__all__ = [
    "BoundsResult", "ConvergenceError", "CurvatureQuery", "DomainError", "Ellipsoid",
    "Estimate", "EvaluationReport", "FdParams", "MonteCarloConfig", "MultiIndex",
    "Projector", "QuadratureConfig", "QuadratureError", "RatioResult", "SubspaceBasis",
    "curvature_bounds", "elementary_symmetric", "fd_integral", "fd_series",
    "haar_subspace_sample", "kubota_mc", "lauricella_fd", "log_elementary_symmetric",
    "lp_sphere_mean", "lp_symmetric_identity", "minor_det", "mk_ball", "mk_flat_ball",
    "mk_ratio", "multi_indices", "principal_minor_sum", "projected_volume",
    "ratio_asymptotic", "ratio_bounds", "ratio_norm", "ratio_via_fd",
    "sphere_mean_homogeneous", "sum_sq_minors", "surface_area", "unit_ball_volume",
    "unit_sphere_area",
]
